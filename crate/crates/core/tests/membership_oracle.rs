//! Membership in the face-state hull, decided independently of the Bloch
//! round trip: solve `Σ w_μ p_μ = p` by exact elimination, then search the
//! (at most two-dimensional) solution polygon for a nonnegative point.

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use qcube::equivalence::weight_kernel;
use qcube::rational::{int, rat};
use qcube::{face_state, membership, Face, ProbVec8, Rational};

fn face_columns() -> Vec<[Rational; 8]> {
    Face::ALL.iter().map(|f| face_state(*f).into_entries()).collect()
}

/// Reduced row echelon form of `[A | b]`; returns a particular solution and a kernel basis,
/// or `None` when the system is inconsistent.
fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let rows = a.len();
    let cols = a[0].len();
    let mut m: Vec<Vec<Rational>> = a.iter().zip(b).map(|(r, v)| r.iter().cloned().chain([v.clone()]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut particular = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = m[i][cols].clone();
    }
    let kernel = (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); cols];
            v[free] = Rational::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -m[i][free].clone();
            }
            v
        })
        .collect();
    Some((particular, kernel))
}

/// Some `w ≥ 0` with `Σ w_μ p_μ = p`, if one exists.
fn oracle(p: &ProbVec8) -> Option<Vec<Rational>> {
    let cols = face_columns();
    let a: Vec<Vec<Rational>> = (0..8).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let (w0, kernel) = solve(&a, p.entries())?;
    assert_eq!(kernel.len(), 2, "face states span a four-dimensional affine set");
    let at = |t: &[Rational; 2]| -> Vec<Rational> {
        (0..6).map(|i| &w0[i] + &t[0] * &kernel[0][i] + &t[1] * &kernel[1][i]).collect()
    };
    // Vertices of {t : w(t) ≥ 0} sit where two constraints are tight.
    for i in 0..6 {
        for j in i + 1..6 {
            let (a1, b1, c1) = (&kernel[0][i], &kernel[1][i], -w0[i].clone());
            let (a2, b2, c2) = (&kernel[0][j], &kernel[1][j], -w0[j].clone());
            let det = a1 * b2 - b1 * a2;
            if det.is_zero() {
                continue;
            }
            let t = [(&c1 * b2 - b1 * &c2) / &det, (a1 * &c2 - &c1 * a2) / &det];
            let w = at(&t);
            if w.iter().all(|x| !x.is_negative()) {
                return Some(w);
            }
        }
    }
    None
}

fn probvec(xs: [i64; 8], den: i64) -> ProbVec8 {
    ProbVec8::new(xs.map(|x| rat(x, den))).unwrap()
}

fn recombine(w: &[Rational; 6]) -> ProbVec8 {
    let states: Vec<ProbVec8> = Face::ALL.iter().map(|f| face_state(*f)).collect();
    ProbVec8::mixture(w.iter().zip(states.iter())).unwrap()
}

#[test]
fn published_kernel_spans_solver_kernel() {
    let cols = face_columns();
    let a: Vec<Vec<Rational>> = (0..8).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let (_, kernel) = solve(&a, face_state(Face::U).entries()).unwrap();
    assert_eq!(kernel.len(), 2);
    let [k1, k2] = weight_kernel();
    for k in [k1, k2] {
        for row in &a {
            let dot: Rational = row.iter().zip(k).map(|(x, y)| x * int(y)).sum();
            assert!(dot.is_zero());
        }
    }
    // independent, hence a basis of the same plane
    assert!(k1[2] * k2[4] - k1[4] * k2[2] != 0);
}

#[test]
fn frozen_cases() {
    let cases: [(ProbVec8, bool); 7] = [
        (ProbVec8::uniform(), true),
        (face_state(Face::F), true),
        (probvec([1, 0, 0, 0, 0, 0, 0, 0], 1), false),
        // antipodal pair: zero Bloch vector but not the uniform state
        (probvec([1, 0, 0, 0, 0, 0, 1, 0], 2), false),
        (probvec([3, 3, 1, 1, 3, 3, 1, 1], 16), true),
        (probvec([2, 2, 2, 2, 0, 0, 0, 0], 8), true),
        (probvec([1, 1, 1, 1, 1, 1, 1, 0], 7), false),
    ];
    for (p, expected) in cases {
        assert_eq!(oracle(&p).is_some(), expected, "oracle on {p}");
        assert_eq!(membership(&p).is_member(), expected, "membership on {p}");
    }
}

fn face_mixture() -> impl Strategy<Value = ProbVec8> {
    prop::array::uniform6(0u32..8).prop_filter("nonzero", |w| w.iter().any(|&x| x > 0)).prop_map(|w| {
        let total: i64 = w.iter().map(|&x| i64::from(x)).sum();
        let weights: Vec<Rational> = w.iter().map(|&x| rat(i64::from(x), total)).collect();
        let states: Vec<ProbVec8> = Face::ALL.iter().map(|f| face_state(*f)).collect();
        ProbVec8::mixture(weights.iter().zip(states.iter())).unwrap()
    })
}

fn arbitrary_probvec() -> impl Strategy<Value = ProbVec8> {
    prop::array::uniform8(0i64..5).prop_filter("nonzero", |w| w.iter().any(|&x| x > 0)).prop_map(|w| {
        let total: i64 = w.iter().sum();
        probvec(w, total)
    })
}

proptest! {
    #[test]
    fn membership_agrees_with_oracle(p in prop_oneof![face_mixture(), arbitrary_probvec()]) {
        prop_assert_eq!(membership(&p).is_member(), oracle(&p).is_some());
    }

    #[test]
    fn reported_weights_reproduce_the_state(p in face_mixture()) {
        let m = membership(&p);
        let w = m.weights.expect("face mixtures are members");
        prop_assert!(w.iter().all(|x| !x.is_negative()));
        prop_assert_eq!(recombine(&w), p);
    }
}
