use isodescent::arith::kummer::kummer_class;
use isodescent::arith::rat;
use isodescent::arith::sigma::{sigma_set, Place};
use isodescent::descent::{biquadratic_local_solvable, BiquadraticSpace, TwoIsogenyDirection};
use isodescent::descent::{selmer_2isogeny, selmer_4isogeny};
use isodescent::Rational;
use std::collections::BTreeSet;
use std::time::Instant;

fn t_of_r(num: i64, den: i64) -> Rational {
    let r = rat(num, den);
    let r2 = &r * &r;
    (&r2 * &r2 - rat(6, 1) * &r2 + rat(1, 1)) / (rat(2, 1) * &r2 * &r - rat(2, 1) * &r)
}

fn profile(tag: &str, t: &Rational) {
    let start = Instant::now();
    let eta = selmer_2isogeny(t, TwoIsogenyDirection::Eta).unwrap();
    let vh = selmer_2isogeny(t, TwoIsogenyDirection::VarphiHat).unwrap();
    let four = selmer_4isogeny(t).unwrap();
    let mut image: BTreeSet<_> = BTreeSet::new();
    let mut kernel = 0u64;
    for c in &four.all_elements {
        let pr = kummer_class(&c.representative(), 2);
        if pr.is_trivial() {
            kernel += 1;
        }
        image.insert(pr);
    }
    println!(
        "{tag}: eta 2^{} vh 2^{} four 2^{} | kernel {} (eta/2 = {}) image {} (vh = {}) | {:?}",
        eta.log2_size(),
        vh.log2_size(),
        four.log2_size(),
        kernel,
        eta.size() / 2,
        image.len(),
        vh.size(),
        start.elapsed()
    );
}

fn main() {
    profile("t=8  ", &rat(8, 1));
    profile("t=3/2", &rat(3, 2));
    for (n, d) in [(15i64, 56i64), (24, 65), (11, 69), (7, 88), (12, 97)] {
        profile(&format!("r={n}/{d}"), &t_of_r(n, d));
    }

    // verdict stability under d -> d * lambda^4 at the rejecting primes
    let t = t_of_r(15, 56);
    let sigma = sigma_set(&t);
    for p in [1231i64, 3361] {
        let pb = num_bigint::BigInt::from(p);
        if !sigma.primes.contains(&pb) {
            continue;
        }
        for base in [rat(-6, 1), rat(-10, 1), rat(-6 * 4591, 1)] {
            let mut verdicts = Vec::new();
            for lam in [rat(1, 1), rat(p, 1), Rational::new(1.into(), p.into()), rat(3, 5)] {
                let l4 = &lam * &lam * &lam * &lam;
                let d = &base * &l4;
                let space = BiquadraticSpace::new(d, t.clone()).unwrap();
                let v = biquadratic_local_solvable(&space, &Place::Finite(pb.clone())).unwrap().solvable;
                verdicts.push(v);
            }
            let stable = verdicts.windows(2).all(|w| w[0] == w[1]);
            println!("p={p} base={base}: verdicts {verdicts:?} stable={stable}");
        }
    }
}
