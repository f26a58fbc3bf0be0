use std::sync::OnceLock;

use proptest::prelude::*;

use gaudin_core::algebra::{BigComplex, MultiPoly, Rational, Scalar};
use gaudin_core::canonical::canonical_vector;
use gaudin_core::cartan::ProblemInstance;
use gaudin_core::io::{instance_from_value, instance_to_value, scalar_from_json, scalar_to_json};
use gaudin_core::master::{bae_residual, eigenvalues_from_t, BetheCandidate, EigenvalueVector};
use gaudin_core::rep::{PolyModel, WeightSpace};
use gaudin_core::solver::{dedupe_modulo_sl, solve_bae, SolutionRecord, SolverConfig};
use gaudin_core::sov::verify_sklyanin_sl2;

fn q(n: i64, d: i64) -> Rational {
    Rational::from_parts_signed(n.into(), d.into())
}

fn rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

fn weight() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 2i64..=12).prop_filter_map("integral", |(n, d)| (n % d != 0).then(|| q(n, d)))
}

/// Distinct exact points.
fn points(n: usize) -> impl Strategy<Value = Vec<Scalar>> {
    proptest::collection::btree_set(-30i64..=30, n).prop_map(|s| s.into_iter().map(|k| Scalar::ratio(k, 3)).collect())
}

fn instance(rank: usize, n: usize, l: Vec<usize>) -> impl Strategy<Value = ProblemInstance> {
    (proptest::collection::vec(proptest::collection::vec(weight(), rank), n), points(n))
        .prop_map(move |(m, z)| ProblemInstance::type_a(m, z, l.clone()).unwrap())
}

fn generic_sl2() -> ProblemInstance {
    let z = vec![Scalar::int(0), Scalar::int(1), Scalar::int(2)];
    ProblemInstance::type_a(vec![vec![q(1, 3)], vec![q(2, 1)], vec![q(-1, 2)]], z, vec![2]).unwrap()
}

fn solved() -> &'static (ProblemInstance, Vec<SolutionRecord>) {
    static CELL: OnceLock<(ProblemInstance, Vec<SolutionRecord>)> = OnceLock::new();
    CELL.get_or_init(|| {
        let inst = generic_sl2();
        let cfg = SolverConfig { precision: 128, starts: 96, ..SolverConfig::default() };
        let sols = solve_bae(&inst, &cfg).unwrap();
        (inst, sols)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rational_json_round_trip(x in rational()) {
        let s = Scalar::Exact(x);
        prop_assert_eq!(scalar_from_json(&scalar_to_json(&s), "x").unwrap(), s);
    }

    #[test]
    fn approx_json_round_trip(re in -1e6f64..1e6, im in -1e6f64..1e6, prec in 64usize..400) {
        let s = Scalar::Approx(BigComplex::from_f64(re, im, prec));
        prop_assert_eq!(scalar_from_json(&scalar_to_json(&s), "x").unwrap(), s);
    }

    #[test]
    fn instance_json_round_trip(inst in instance(2, 3, vec![1, 2])) {
        prop_assert_eq!(instance_from_value(&instance_to_value(&inst)).unwrap(), inst);
    }

    /// The weight function is symmetric in the roots of one color.
    #[test]
    fn canonical_symmetric(inst in instance(2, 2, vec![2, 1]), t in points(3), swap in any::<bool>()) {
        let (a, b) = if swap { (1, 0) } else { (0, 1) };
        let one = BetheCandidate::new(vec![vec![t[0].clone(), t[1].clone()], vec![t[2].clone()]]);
        let two = BetheCandidate::new(vec![vec![t[a].clone(), t[b].clone()], vec![t[2].clone()]]);
        let (Ok(v1), Ok(v2)) = (canonical_vector(&inst, &one), canonical_vector(&inst, &two)) else {
            return Ok(());
        };
        prop_assert_eq!(v1, v2);
    }

    /// Translation invariance: Σ_s μ_s = −Σ of the Bethe residuals.
    #[test]
    fn mu_sum_matches_residuals(inst in instance(2, 3, vec![1, 1]), t in points(2)) {
        let cand = BetheCandidate::new(vec![vec![t[0].clone()], vec![t[1].clone()]]);
        let (Ok(r), Ok(mu)) = (bae_residual(&inst, &cand), eigenvalues_from_t(&inst, &cand)) else {
            return Ok(());
        };
        let total = r.flatten().iter().fold(Scalar::zero(), |a, b| &a + b);
        prop_assert_eq!(mu.sum(), -total);
    }

    /// Exact Sklyanin identity for random polynomials, not just basis monomials.
    #[test]
    fn sklyanin_random_polynomial(
        inst in instance(1, 3, vec![2]),
        coeffs in proptest::collection::vec(rational(), 6),
        mu in proptest::collection::vec(rational(), 3),
    ) {
        let space = WeightSpace::new(&inst, &inst.l).unwrap();
        let model = PolyModel::from_space(&space).unwrap();
        let mut f = MultiPoly::zero(model.vars());
        for (b, c) in space.basis().iter().zip(&coeffs) {
            f = f.add(&MultiPoly::monomial(model.vars(), model.monomial(b), Scalar::Exact(c.clone())));
        }
        let mu = EigenvalueVector { mu: mu.into_iter().map(Scalar::Exact).collect() };
        prop_assert!(verify_sklyanin_sl2(&inst, &f, &mu, 0.0).unwrap().holds());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Permuting roots within a color and reordering records never changes the orbit set.
    #[test]
    fn dedupe_permutation_invariant(flips in proptest::collection::vec(any::<bool>(), 3), shift in 0usize..3) {
        let (_, sols) = solved();
        prop_assert!(sols.len() >= 2);
        let mut noisy: Vec<SolutionRecord> = Vec::new();
        for (k, s) in sols.iter().enumerate() {
            let mut r = s.clone();
            if flips[k % flips.len()] {
                r.t.t[0].reverse();
            }
            noisy.push(r);
            noisy.push(s.clone());
        }
        let len = noisy.len().max(1);
        noisy.rotate_left(shift % len);
        let out = dedupe_modulo_sl(noisy, 1e-20);
        prop_assert_eq!(out.len(), sols.len());
        for (a, b) in out.iter().zip(sols) {
            prop_assert_eq!(&a.t, &b.t);
        }
    }
}
