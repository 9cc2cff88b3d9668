use drgkit_core::{Rational, Scalar, Subspace};
use proptest::prelude::*;

const AMBIENT: usize = 6;

/// Small integer vectors, often dependent, so rank decisions are exercised.
fn vectors() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, AMBIENT), 0..5)
}

fn lift<S: Scalar>(vs: &[Vec<i64>]) -> Vec<Vec<S>> {
    vs.iter().map(|v| v.iter().map(|&x| S::from_i64(x)).collect()).collect()
}

fn span<S: Scalar>(vs: &[Vec<i64>]) -> Subspace<S> {
    Subspace::span(&lift::<S>(vs), AMBIENT).unwrap()
}

fn equal<S: Scalar>(a: &Subspace<S>, b: &Subspace<S>) -> bool {
    a.equals(b).unwrap().contained
}

fn modular_law<S: Scalar>(a: &[Vec<i64>], b: &[Vec<i64>]) {
    let (s, t) = (span::<S>(a), span::<S>(b));
    let sum = s.sum(&t).unwrap();
    let meet = s.intersect(&t).unwrap();
    assert_eq!(sum.dim() + meet.dim(), s.dim() + t.dim());
    assert!(equal(&sum, &t.sum(&s).unwrap()));
    assert!(equal(&meet, &t.intersect(&s).unwrap()));
    assert!(s.contained_in(&sum).unwrap().contained && t.contained_in(&sum).unwrap().contained);
    assert!(meet.contained_in(&s).unwrap().contained && meet.contained_in(&t).unwrap().contained);
    for space in [&s, &t, &sum, &meet] {
        space.check_invariants().unwrap();
    }
}

fn complement_round_trip<S: Scalar>(a: &[Vec<i64>], b: &[Vec<i64>]) {
    let sub = span::<S>(a);
    let amb = sub.sum(&span::<S>(b)).unwrap();
    let r = sub.orth_complement_in(&amb).unwrap();
    r.check_invariants().unwrap();
    assert_eq!(r.dim(), amb.dim() - sub.dim());
    assert!(r.contained_in(&amb).unwrap().contained);
    assert!(equal(&r.sum(&sub).unwrap(), &amb));
    for u in r.basis() {
        for v in sub.basis() {
            let dot: f64 = u.iter().zip(v).map(|(x, y)| x.to_f64() * y.to_f64()).sum();
            assert!(dot.abs() < 1e-9);
        }
    }
}

proptest! {
    #[test]
    fn modular_law_float(a in vectors(), b in vectors()) {
        modular_law::<f64>(&a, &b);
    }

    #[test]
    fn modular_law_exact(a in vectors(), b in vectors()) {
        modular_law::<Rational>(&a, &b);
    }

    #[test]
    fn complement_round_trip_float(a in vectors(), b in vectors()) {
        complement_round_trip::<f64>(&a, &b);
    }

    #[test]
    fn complement_round_trip_exact(a in vectors(), b in vectors()) {
        complement_round_trip::<Rational>(&a, &b);
    }

    #[test]
    fn modes_give_equal_dimensions(a in vectors(), b in vectors()) {
        let (fs, ft) = (span::<f64>(&a), span::<f64>(&b));
        let (es, et) = (span::<Rational>(&a), span::<Rational>(&b));
        prop_assert_eq!(fs.dim(), es.dim());
        prop_assert_eq!(fs.intersect(&ft).unwrap().dim(), es.intersect(&et).unwrap().dim());
        prop_assert_eq!(fs.sum(&ft).unwrap().dim(), es.sum(&et).unwrap().dim());
        prop_assert!(equal(&es.to_f64(), &fs));
    }

    #[test]
    fn rotated_basis_spans_the_same_space(a in vectors(), seed in 0u64..1000) {
        let s = span::<f64>(&a);
        let c = (seed as f64).cos();
        let sn = (seed as f64).sin();
        let mixed: Vec<Vec<f64>> = s
            .basis()
            .windows(2)
            .flat_map(|w| {
                let p: Vec<f64> = w[0].iter().zip(&w[1]).map(|(x, y)| c * x + sn * y).collect();
                let q: Vec<f64> = w[0].iter().zip(&w[1]).map(|(x, y)| -sn * x + c * y).collect();
                [p, q]
            })
            .chain(s.basis().first().cloned())
            .collect();
        prop_assert!(equal(&Subspace::span(&mixed, AMBIENT).unwrap(), &s));
    }
}
