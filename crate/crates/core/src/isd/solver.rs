use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cmsd::{
    cmsd_dumer, cmsd_prange, cmsd_wagner_v1, cmsd_wagner_v2_build, CmsdDescription, CmsdProblem,
    WeightSplit,
};
use super::instance::SdInstance;
use crate::error::{Error, Result};
use crate::linalg::{partial_gaussian_elim, FieldElement, Permutation};
use crate::merge::DEFAULT_LIST_CAP;
use crate::sphere::{log_q, sphere_count_units};
use crate::weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Prange,
    Dumer,
    Wagner1,
    Wagner2,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Prange => "prange",
            Variant::Dumer => "dumer",
            Variant::Wagner1 => "wagner1",
            Variant::Wagner2 => "wagner2",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prange" => Ok(Variant::Prange),
            "dumer" => Ok(Variant::Dumer),
            "wagner1" | "wagner" => Ok(Variant::Wagner1),
            "wagner2" => Ok(Variant::Wagner2),
            _ => Err(Error::InvalidParams(format!("unknown variant {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsdParams {
    pub variant: Variant,
    pub ell: usize,
    pub p: Weight,
    /// Tree depth for the Wagner variants.
    pub a: u32,
    pub split: WeightSplit,
    pub list_size_cap: usize,
    pub max_outer_loops: u64,
    pub seed: u64,
}

impl IsdParams {
    pub fn prange(seed: u64) -> Self {
        IsdParams {
            variant: Variant::Prange,
            ell: 0,
            p: Weight::from_integer(0),
            a: 1,
            split: WeightSplit::All,
            list_size_cap: DEFAULT_LIST_CAP,
            max_outer_loops: 1 << 20,
            seed,
        }
    }

    pub fn dumer(ell: usize, p: Weight, seed: u64) -> Self {
        IsdParams {
            variant: Variant::Dumer,
            ell,
            p,
            ..IsdParams::prange(seed)
        }
    }

    pub fn wagner1(ell: usize, p: Weight, a: u32, seed: u64) -> Self {
        IsdParams {
            variant: Variant::Wagner1,
            a,
            ..IsdParams::dumer(ell, p, seed)
        }
    }

    pub fn wagner2(ell: usize, p: Weight, a: u32, seed: u64) -> Self {
        IsdParams {
            variant: Variant::Wagner2,
            a,
            ..IsdParams::dumer(ell, p, seed)
        }
    }
}

/// Outcome of [`isd_solve`]. Equal seeds give equal reports, apart from
/// `elapsed`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub solution: Option<Vec<FieldElement>>,
    pub outer_loops: u64,
    /// Permutations redrawn because the leading block was singular.
    pub singular_draws: u64,
    /// Sum of the CMSD domain sizes evaluated.
    pub cmsd_points: u64,
    /// CMSD outputs completed and weight-checked.
    pub candidates: u64,
    pub loop_budget: u64,
    /// `1 / (P_1 Z)` from exact sphere counts.
    pub expected_loops: f64,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SolveReport {
    pub fn found(&self) -> bool {
        self.solution.is_some()
    }
}

impl PartialEq for SolveReport {
    fn eq(&self, other: &Self) -> bool {
        self.solution == other.solution
            && self.outer_loops == other.outer_loops
            && self.singular_draws == other.singular_draws
            && self.cmsd_points == other.cmsd_points
            && self.candidates == other.candidates
            && self.loop_budget == other.loop_budget
            && (self.expected_loops == other.expected_loops
                || self.expected_loops.is_nan() && other.expected_loops.is_nan())
    }
}

fn build<R: rand::Rng + ?Sized>(
    params: &IsdParams,
    problem: &CmsdProblem,
    rng: &mut R,
) -> Result<CmsdDescription> {
    let cap = params.list_size_cap;
    match params.variant {
        Variant::Prange => cmsd_prange(problem),
        Variant::Dumer => cmsd_dumer(problem, cap, rng),
        Variant::Wagner1 => cmsd_wagner_v1(problem, params.a, params.split, cap, rng),
        Variant::Wagner2 => cmsd_wagner_v2_build(problem, params.a, cap, rng),
    }
}

fn validate(inst: &SdInstance, params: &IsdParams) -> Result<u64> {
    let wf = inst.weight_function();
    let scaled = params.p * wf.denom() as u64;
    if !scaled.is_integer() {
        return Err(Error::InvalidParams(format!(
            "p = {} is not a multiple of 1/{}",
            params.p,
            wf.denom()
        )));
    }
    let p_units = scaled.to_integer();
    let r = inst.n() - inst.k();
    if params.ell > r {
        return Err(Error::InvalidParams(format!("ℓ = {} exceeds n - k = {r}", params.ell)));
    }
    if p_units > inst.w_units() {
        return Err(Error::InvalidParams(format!("p = {} exceeds w = {}", params.p, inst.w())));
    }
    if params.variant == Variant::Prange && (params.ell != 0 || p_units != 0) {
        return Err(Error::InvalidParams("Prange needs ℓ = 0 and p = 0".into()));
    }
    if params.list_size_cap == 0 {
        return Err(Error::InvalidParams("list size cap must be positive".into()));
    }
    Ok(p_units)
}

/// `ln(1 / P_1)` for the split `(w - p, p)` over `(n - k - ℓ, k + ℓ)`.
fn ln_inv_p1(inst: &SdInstance, ell: usize, p_units: u64) -> f64 {
    let wf = inst.weight_function();
    let q = wf.q();
    let (n, r) = (inst.n(), inst.n() - inst.k());
    let top = sphere_count_units(wf, r - ell, inst.w_units() - p_units);
    if top == Default::default() {
        return f64::INFINITY;
    }
    let sphere = log_q(&sphere_count_units(wf, n, inst.w_units()), q);
    let denom = (sphere - ell as f64).min((r - ell) as f64).max(0.0);
    let ln_q = (q as f64).ln();
    ((denom - log_q(&top, q)) * ln_q).max(0.0)
}

/// Randomized ISD: permute, row-reduce, solve the reduced problem, complete
/// and test. Stops at the first verified solution or when the loop budget
/// `min(max_outer_loops, 10 ⌈1 / (P_1 Z)⌉)` runs out.
pub fn isd_solve(inst: &SdInstance, params: &IsdParams) -> Result<SolveReport> {
    let start = Instant::now();
    let p_units = validate(inst, params)?;
    let wf = inst.weight_function();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = inst.n();
    let ell = params.ell;
    let rest_units = inst.w_units() - p_units;
    let ln_inv_p1 = ln_inv_p1(inst, ell, p_units);

    let mut report = SolveReport {
        solution: None,
        outer_loops: 0,
        singular_draws: 0,
        cmsd_points: 0,
        candidates: 0,
        loop_budget: params.max_outer_loops,
        expected_loops: f64::NAN,
        elapsed: Duration::ZERO,
    };
    while report.outer_loops < report.loop_budget {
        report.outer_loops += 1;
        let (pi, elim) = loop {
            let pi = Permutation::random(n, &mut rng);
            let hp = pi.apply_columns(inst.h())?;
            match partial_gaussian_elim(&hp, ell, inst.s()) {
                Ok(e) => break (pi, e),
                Err(Error::SingularTopLeft(_)) => report.singular_draws += 1,
                Err(e) => return Err(e),
            }
        };
        let problem = CmsdProblem {
            wf,
            h: &elim.h_second,
            s: &elim.s_second,
            p_units,
        };
        let desc = build(params, &problem, &mut rng)?;
        if report.expected_loops.is_nan() {
            let ln_z = desc.expected_outputs().ln();
            let expected = (ln_inv_p1 - ln_z).exp().max(1.0);
            report.expected_loops = expected;
            let budget = 10.0 * expected.ceil();
            if budget.is_finite() && budget < params.max_outer_loops as f64 {
                report.loop_budget = report.loop_budget.min((budget as u64).max(report.outer_loops));
            }
        }
        report.cmsd_points += desc.domain_size();
        for k in 0..desc.domain_size() {
            let Some(e2) = desc.try_evaluate(k) else {
                continue;
            };
            report.candidates += 1;
            let e1 = elim.s_prime.sub(&elim.h_prime.mul_vec(&e2)?)?;
            if wf.vector_units(&e1)? != rest_units {
                continue;
            }
            let x = pi.inverse().apply_vector(&e1.concat(&e2)?)?;
            assert!(inst.verify_solution(&x), "completed vector fails verification");
            report.solution = Some(x.into_entries());
            report.elapsed = start.elapsed();
            return Ok(report);
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;

    use super::*;
    use crate::isd::generate_instance;
    use crate::linalg::FqVector;
    use crate::weight::WeightFunction;

    fn instance(wf: &WeightFunction, n: usize, k: usize, w: u64, seed: u64) -> SdInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        generate_instance(wf, n, k, Weight::from_integer(w), &mut rng).unwrap()
    }

    fn assert_solves(inst: &SdInstance, report: &SolveReport) {
        let e = report.solution.as_ref().expect("solution found");
        let v = FqVector::new(inst.weight_function().field(), e.clone()).unwrap();
        assert!(inst.verify_solution(&v));
    }

    #[test]
    fn prange_solves_small_instances() {
        let wf = WeightFunction::hamming(3).unwrap();
        for seed in 0..5 {
            let inst = instance(&wf, 16, 8, 3, seed);
            let rep = isd_solve(&inst, &IsdParams::prange(seed)).unwrap();
            assert_solves(&inst, &rep);
            assert!(rep.outer_loops <= rep.loop_budget);
        }
    }

    #[test]
    fn all_variants_solve_lee_instances() {
        let wf = WeightFunction::lee(5).unwrap();
        let inst = instance(&wf, 20, 10, 6, 7);
        let p = Weight::from_integer(2);
        for params in [
            IsdParams::prange(1),
            IsdParams::dumer(2, p, 1),
            IsdParams::wagner1(3, Weight::from_integer(4), 2, 1),
            IsdParams::wagner2(2, Weight::from_integer(3), 1, 1),
        ] {
            let rep = isd_solve(&inst, &params).unwrap();
            assert_solves(&inst, &rep);
        }
    }

    #[test]
    fn zero_syndrome_gives_zero_vector_at_weight_zero() {
        let wf = WeightFunction::lee(7).unwrap();
        let inst = instance(&wf, 10, 5, 0, 3);
        let rep = isd_solve(&inst, &IsdParams::prange(0)).unwrap();
        assert_eq!(rep.solution, Some(vec![0; 10]));
        assert_eq!(rep.outer_loops, 1);
    }

    #[test]
    fn fixed_seed_is_deterministic() {
        let wf = WeightFunction::lee(5).unwrap();
        let inst = instance(&wf, 18, 9, 5, 9);
        let params = IsdParams::dumer(2, Weight::from_integer(2), 42);
        let a = isd_solve(&inst, &params).unwrap();
        let b = isd_solve(&inst, &params).unwrap();
        assert_eq!(a, b);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let wf = WeightFunction::hamming(3).unwrap();
        let inst = instance(&wf, 24, 12, 9, 4);
        let params = IsdParams {
            max_outer_loops: 2,
            ..IsdParams::prange(0)
        };
        let rep = isd_solve(&inst, &params).unwrap();
        assert!(rep.outer_loops <= 2);
        if !rep.found() {
            assert_eq!(rep.outer_loops, 2);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let wf = WeightFunction::lee(5).unwrap();
        let inst = instance(&wf, 12, 6, 3, 5);
        let bad = [
            IsdParams { ell: 1, ..IsdParams::prange(0) },
            IsdParams::dumer(7, Weight::from_integer(1), 0),
            IsdParams::dumer(2, Weight::from_integer(4), 0),
            IsdParams::dumer(2, Weight::new(1, 2), 0),
            IsdParams { list_size_cap: 0, ..IsdParams::dumer(2, Weight::from_integer(1), 0) },
        ];
        for params in bad {
            assert!(isd_solve(&inst, &params).is_err(), "{params:?}");
        }
        assert_eq!("wagner2".parse::<Variant>().unwrap(), Variant::Wagner2);
        assert!("stern".parse::<Variant>().is_err());
    }
}
