//! Library results against independent brute-force oracles.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use recfrac::bigmath::{det_exact, frac, int, Rational, SquareMatrix};
use recfrac::forms::NmForm;
use recfrac::paraperm::{Parafunction, TriMatrix};
use recfrac::pell::{norm3_closed, norm5_closed};
use recfrac::recfrac::{
    complete_homogeneous, complete_homogeneous_brute, from_polynomial, homogeneous_sequence,
    MonicRecurrencePoly,
};

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    frac(rng.gen_range(-9..=9), rng.gen_range(1..=5))
}

fn nonzero_rational(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let q = small_rational(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

/// Leibniz expansion over every permutation.
fn det_by_permutations(m: &SquareMatrix) -> Rational {
    fn rec(
        m: &SquareMatrix,
        row: usize,
        used: &mut Vec<bool>,
        sign: bool,
        acc: Rational,
        total: &mut Rational,
    ) {
        let n = m.order();
        if row == n {
            *total += if sign { -acc } else { acc };
            return;
        }
        let mut inversions_skipped = 0;
        for col in 0..n {
            if used[col] {
                continue;
            }
            // columns to the left still unused become inversions
            let flip = inversions_skipped % 2 == 1;
            used[col] = true;
            let next = &acc * m.get(row, col);
            if !next.is_zero() {
                rec(m, row + 1, used, sign ^ flip, next, total);
            }
            used[col] = false;
            inversions_skipped += 1;
        }
    }
    let mut total = Rational::zero();
    rec(
        m,
        0,
        &mut vec![false; m.order()],
        false,
        Rational::one(),
        &mut total,
    );
    total
}

#[test]
fn determinant_matches_permutation_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..240 {
        let n = 1 + trial % 5;
        let m = SquareMatrix::from_fn(n, |_, _| small_rational(&mut rng));
        assert_eq!(det_exact(&m), det_by_permutations(&m), "{m}");
    }
}

#[test]
fn triangular_determinant_is_diagonal_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in 1..=7 {
        let m = SquareMatrix::from_fn(n, |i, j| {
            if j <= i {
                small_rational(&mut rng)
            } else {
                int(0)
            }
        });
        let diag = (0..n).fold(Rational::one(), |acc, i| acc * m.get(i, i));
        assert_eq!(m.det(), diag);
    }
}

#[test]
fn parafunction_evaluators_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for trial in 0..60 {
        let n = 1 + trial % 10;
        let a = TriMatrix::from_fn(n, |_, _| small_rational(&mut rng));
        for kind in [Parafunction::Pper, Parafunction::Ddet] {
            let def = a.eval_def(kind);
            assert_eq!(a.eval_fast(kind), def);
            for i in 1..=n {
                assert_eq!(
                    a.eval_expand_table(i, kind).unwrap(),
                    def,
                    "order {n}, i {i}"
                );
            }
        }
    }
}

#[test]
fn continued_fraction_degeneration() {
    // [q1; ...] with partial numerators p_i, evaluated bottom-up
    let q = [int(2), int(3), frac(1, 2), int(5), int(-4)];
    let p = [int(0), int(7), int(-1), frac(3, 2), int(6)];
    for len in 1..=q.len() {
        let mut value = q[len - 1].clone();
        for i in (0..len - 1).rev() {
            value = &q[i] + &p[i + 1] / value;
        }
        let rows = (0..len)
            .map(|r| {
                let mut row = vec![int(0); r + 1];
                row[r] = q[r].clone();
                if r > 0 {
                    row[r - 1] = &p[r] / &q[r];
                }
                row
            })
            .collect();
        let num = TriMatrix::new(rows).unwrap();
        let den = num.corner(len, 2).unwrap();
        assert_eq!(num.pper() / den.pper(), value, "length {len}");
    }
}

#[test]
fn complete_homogeneous_brute_equals_recurrence() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for trial in 0..120 {
        let n = 1 + trial % 4;
        let xs: Vec<Rational> = (0..n).map(|_| small_rational(&mut rng)).collect();
        for m in 0..=10 {
            assert_eq!(
                complete_homogeneous(&xs, m),
                complete_homogeneous_brute(&xs, m)
            );
        }
    }
}

#[test]
fn periodic_numerators_follow_the_homogeneous_recurrence() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for trial in 0..40 {
        let n = 1 + trial % 5;
        let coeffs: Vec<Rational> = (0..n).map(|_| nonzero_rational(&mut rng)).collect();
        let poly = MonicRecurrencePoly::new(coeffs.clone()).unwrap();
        let u = homogeneous_sequence(&coeffs, 60);
        for t in from_polynomial(&poly).truncations().take(60) {
            assert_eq!(t.p, u[t.index]);
        }
    }
}

#[test]
fn truncations_equal_parapermanent_ratios() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for n in 1..=4 {
        let coeffs: Vec<Rational> = (0..n).map(|_| nonzero_rational(&mut rng)).collect();
        let rf = from_polynomial(&MonicRecurrencePoly::new(coeffs).unwrap());
        for m in 1..=10 {
            let by_rec = rf.truncation(m).unwrap();
            let by_pper = rf.truncation_by_pper(m).unwrap();
            assert_eq!(by_rec.p, by_pper.p, "n={n} m={m}");
            assert_eq!(by_rec.value(), by_pper.value(), "n={n} m={m}");
        }
    }
}

#[test]
fn closed_norms_equal_determinants() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..120 {
        let m = small_rational(&mut rng);
        let s: Vec<Rational> = (0..3).map(|_| small_rational(&mut rng)).collect();
        let x = NmForm::new(m.clone(), s.clone()).unwrap();
        assert_eq!(norm3_closed(&s[0], &s[1], &s[2], &m), x.norm());

        let s: [Rational; 5] = std::array::from_fn(|_| small_rational(&mut rng));
        let x = NmForm::new(m.clone(), s.to_vec()).unwrap();
        assert_eq!(norm5_closed(&s, &m), x.norm());
    }
}

#[test]
fn form_arithmetic_is_the_matrix_arithmetic() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for trial in 0..60 {
        let n = 1 + trial % 6;
        let m = nonzero_rational(&mut rng);
        let x = NmForm::new(
            m.clone(),
            (0..n).map(|_| small_rational(&mut rng)).collect(),
        )
        .unwrap();
        let y = NmForm::new(
            m.clone(),
            (0..n).map(|_| small_rational(&mut rng)).collect(),
        )
        .unwrap();
        let xy = x.multiply(&y).unwrap();
        assert_eq!(xy.embed(), &x.embed() * &y.embed());
        assert_eq!(xy.norm(), x.norm() * y.norm());
        if !x.norm().is_zero() {
            let c = x.conjugate().unwrap();
            assert_eq!(
                x.multiply(&c).unwrap(),
                NmForm::scalar(n, m.clone(), x.norm()).unwrap()
            );
            assert!(x.multiply(&x.inverse().unwrap()).unwrap().is_identity());
        }
    }
}

#[test]
fn integral_units_have_integral_inverses() {
    for (m, coords) in [
        (4, vec![5, 3, 2]),
        (-4, vec![1, -1, 2, -2, 1]),
        (2, vec![3, 2]),
        (7, vec![4, 2, 1]),
    ] {
        let x = NmForm::from_ints(m, &coords).unwrap();
        assert!(x.norm().abs().is_one());
        assert!(x.inverse().unwrap().is_integral());
    }
}
