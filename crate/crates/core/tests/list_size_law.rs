//! Observed tree-decoder list sizes against the asymptotic exponents.

use isd_core::entropy::sphere_exponent;
use isd_core::isd::{cmsd_wagner_v1, CmsdProblem, WeightSplit};
use isd_core::linalg::{FqMatrix, FqVector};
use isd_core::merge::DEFAULT_LIST_CAP;
use isd_core::weight::WeightFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

#[test]
fn list_sizes_follow_the_u_exponent() {
    let wf = WeightFunction::hamming(3).unwrap();
    let f = wf.field();
    let a = 2u32;
    let trials = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut predicted = Vec::new();
    let (mut base_obs, mut mid_obs) = (Vec::new(), Vec::new());
    let (mut top_sum, mut top_expected) = (0.0, 0.0);
    for big_n in [24usize, 32, 40, 48, 56, 64] {
        let ell = (0.35 * big_n as f64).round() as usize;
        let p = big_n / 4;
        let m0 = ell as f64 / big_n as f64;
        let s0 = sphere_exponent(&wf, p as f64 / big_n as f64).unwrap().s;
        let u = (s0 / f64::from(1 << a)).min(m0 / a as f64);
        let (mut base, mut mid) = (0.0, 0.0);
        for _ in 0..trials {
            let h = FqMatrix::random(f, ell, big_n, &mut rng);
            let s = FqVector::new(f, (0..ell).map(|_| rng.gen_range(0..3)).collect()).unwrap();
            let prob = CmsdProblem { wf: &wf, h: &h, s: &s, p_units: p as u64 };
            let d = cmsd_wagner_v1(&prob, a, WeightSplit::Balanced, DEFAULT_LIST_CAP, &mut rng)
                .unwrap();
            let sizes = &d.list_sizes()[0];
            base += sizes[0].iter().sum::<usize>() as f64 / sizes[0].len() as f64;
            mid += sizes[1].iter().sum::<usize>() as f64 / sizes[1].len() as f64;
            top_sum += sizes[2][0] as f64;
            top_expected += d.expected_outputs();
        }
        predicted.push(big_n as f64 * u);
        base_obs.push((base / trials as f64).log(3.0));
        mid_obs.push((mid / trials as f64).log(3.0));
    }
    let sb = slope(&predicted, &base_obs);
    let sm = slope(&predicted, &mid_obs);
    assert!((sb - 1.0).abs() <= 0.15, "base lists: slope {sb}, {predicted:?} vs {base_obs:?}");
    assert!((sm - 1.0).abs() <= 0.15, "level-1 lists: slope {sm}, {predicted:?} vs {mid_obs:?}");
    // the final list has the size its realized merge sets predict
    let ratio = top_sum / top_expected;
    assert!((0.7..1.3).contains(&ratio), "final list {top_sum} vs {top_expected}");
}
