use num_traits::Signed;
use proptest::prelude::*;

use qpencil::chern::{series_inv, series_mul, TruncSeries};
use qpencil::exactmath::{
    det, det_int, gram_diagonalize, int, rank, rat, smith_normal_form, BigInt, QMatrix, Rational, ZMatrix,
};
use qpencil::geombasis::{plane_check, power_sum, LambdaConfig};
use qpencil::gwcount::{
    dimension_rejects, inequality_rejects, partitions, virdim_relative, DegenerationTerm, RelativeGeometry,
    RelativeProblem,
};

fn leibniz(a: &[Vec<i64>]) -> i128 {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0i128;
    // Heap's algorithm, tracking the sign.
    fn go(k: usize, perm: &mut Vec<usize>, sign: i128, a: &[Vec<i64>], total: &mut i128) -> i128 {
        if k == 1 {
            *total += sign * perm.iter().enumerate().map(|(i, &j)| a[i][j] as i128).product::<i128>();
            return sign;
        }
        let mut s = go(k - 1, perm, sign, a, total);
        for i in 0..k - 1 {
            if k.is_multiple_of(2) {
                perm.swap(i, k - 1)
            } else {
                perm.swap(0, k - 1)
            }
            s = go(k - 1, perm, -s, a, total);
        }
        s
    }
    go(n, &mut perm, 1, a, &mut total);
    total
}

fn small_matrix(n: usize, range: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-range..=range, n), n)
}

fn zmat(a: &[Vec<i64>]) -> ZMatrix {
    let flat: Vec<i64> = a.iter().flatten().copied().collect();
    ZMatrix::from_i64(a.len(), a[0].len(), &flat).unwrap()
}

/// Product of elementary integer column operations.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> QMatrix {
    let mut u = QMatrix::identity(n);
    for &(i, j, c) in ops {
        if i % n == j % n {
            continue;
        }
        for r in 0..n {
            let v = u[(r, j % n)].clone() * int(c);
            u[(r, i % n)] += v;
        }
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn signature_is_a_congruence_invariant(
        a in small_matrix(4, 3),
        ops in prop::collection::vec((0usize..4, 0usize..4, -2i64..=2), 0..8),
    ) {
        let n = 4;
        let g = QMatrix::from_fn(n, n, |i, j| int(a[i.min(j)][i.max(j)]));
        let u = unimodular(n, &ops);
        let before = gram_diagonalize(&g).unwrap().signature();
        let after = gram_diagonalize(&g.congruent(&u).unwrap()).unwrap().signature();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn determinant_matches_leibniz_and_rank(a in small_matrix(4, 2)) {
        let z = zmat(&a);
        let d = det_int(&z).unwrap();
        prop_assert_eq!(d.clone(), BigInt::from(leibniz(&a)));
        let q = z.to_rational();
        prop_assert_eq!(det(&q).unwrap(), Rational::from_integer(d.clone()));
        prop_assert_eq!(d != BigInt::from(0), rank(&q) == 4);
    }

    #[test]
    fn smith_form_is_an_equivalent_divisor_chain(a in small_matrix(3, 4)) {
        let z = zmat(&a);
        let s = smith_normal_form(&z);
        let prod = s.left.matmul(&z).unwrap().matmul(&s.right).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { s.diagonal[i].clone() } else { BigInt::from(0) };
                prop_assert_eq!(prod[(i, j)].clone().abs(), expected);
            }
        }
        for w in s.diagonal.windows(2) {
            if w[0] != BigInt::from(0) {
                prop_assert_eq!(&w[1] % &w[0], BigInt::from(0));
            } else {
                prop_assert_eq!(w[1].clone(), BigInt::from(0));
            }
        }
        let d: BigInt = s.diagonal.iter().product();
        prop_assert_eq!(d, det_int(&z).unwrap().abs());
    }

    #[test]
    fn rational_sum_matches_schoolbook(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
        let (num, den) = (a as i128 * d as i128 + c as i128 * b as i128, b as i128 * d as i128);
        let g = num_gcd(num.abs(), den);
        let expected = Rational::new(BigInt::from(num / g), BigInt::from(den / g));
        prop_assert_eq!(rat(a, b) + rat(c, d), expected.clone());
        prop_assert_eq!(expected.denom().clone(), BigInt::from(den / g));
    }

    #[test]
    fn series_times_inverse_is_one(c0 in prop::sample::select(vec![-3i64, -1, 1, 2, 5]), rest in prop::collection::vec(-5i64..=5, 6)) {
        let mut coeffs = vec![int(c0)];
        coeffs.extend(rest.iter().map(|&x| int(x)));
        let s = TruncSeries::from_coeffs(7, &coeffs);
        let inv = series_inv(&s).unwrap();
        prop_assert_eq!(series_mul(&s, &inv).unwrap(), TruncSeries::one(7));
    }

    #[test]
    fn virdim_is_affine_in_each_argument(m in (1u32..=6).prop_map(|k| 2 * k), n in 0u32..8, beta in 1u32..6) {
        let g = RelativeGeometry::x1(m);
        let mu = vec![1; beta as usize];
        let base = virdim_relative(&RelativeProblem::new(n, beta, mu.clone()).unwrap(), &g);
        let more_n = virdim_relative(&RelativeProblem::new(n + 1, beta, mu.clone()).unwrap(), &g);
        prop_assert_eq!(more_n - base, 1);
        // Raising one contact order raises beta but not l.
        let mut mu2 = mu.clone();
        mu2[0] += 1;
        let more_beta = virdim_relative(&RelativeProblem::new(n, beta + 1, mu2).unwrap(), &g);
        prop_assert_eq!(more_beta - base, m as i64 - 1);
        // One more contact point of order one raises both.
        let mut mu3 = mu;
        mu3.push(1);
        let more_l = virdim_relative(&RelativeProblem::new(n, beta + 1, mu3).unwrap(), &g);
        prop_assert_eq!(more_l - base, m as i64);
    }

    #[test]
    fn l_bound_never_rejects_a_dimension_solution(
        m in (1u32..=6).prop_map(|k| 2 * k),
        n1 in 0u32..=1,
        beta_frac in 0.0f64..1.0,
        pick in any::<prop::sample::Index>(),
        deltas in prop::collection::vec(1u32..=11, 0..7),
    ) {
        let beta1 = (beta_frac * (m / 2 + 1) as f64) as u32;
        let all: Vec<Vec<u32>> = (0..=beta1).flat_map(|l| partitions(beta1, l)).collect();
        let mu = pick.get(&all).clone();
        let l = mu.len();
        let mut delta: Vec<u32> = deltas.iter().take(l).map(|d| 1 + (d - 1) % (m - 1)).collect();
        delta.resize(l, 1);
        let term = DegenerationTerm {
            n1, n2: m + 3 - n1, beta1, beta2: m / 2 - beta1, l: l as u32, mu, delta_degrees: delta,
            x1_insertions: if n1 == 1 { vec![m as usize + 2] } else { vec![] }, delta_expanded: true,
        };
        prop_assert!(!inequality_rejects(&term, m) || dimension_rejects(&term, m));
    }
}

fn num_gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Complete homogeneous symmetric polynomial `h_k` of the nodes.
fn complete_homogeneous(nodes: &[Rational], k: usize) -> Rational {
    let mut h = vec![int(0); k + 1];
    h[0] = int(1);
    for x in nodes {
        for d in 1..=k {
            let v = h[d - 1].clone() * x;
            h[d] += v;
        }
    }
    h[k].clone()
}

fn distinct_nodes(count: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::btree_set((-40i64..40, 1i64..5), count..=count * 2)
        .prop_map(|s| s.into_iter().map(|(a, b)| rat(a, b)).collect::<std::collections::BTreeSet<_>>())
        .prop_filter("enough distinct values", move |s| s.len() >= count)
        .prop_map(move |s| s.into_iter().take(count).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn power_sums_are_complete_symmetric_functions(nodes in (2u32..=5).prop_flat_map(|k| distinct_nodes(2 * k as usize + 3))) {
        let m = (nodes.len() - 3) as u32;
        let cfg = LambdaConfig::for_m(m, nodes.clone()).unwrap();
        for p in 0..=m + 4 {
            let expected = if p < m + 2 { int(0) } else { complete_homogeneous(&nodes, (p - m - 2) as usize) };
            prop_assert_eq!(power_sum(&cfg, p), expected);
        }
    }

    #[test]
    fn random_planes_lie_in_x(m in (2u32..=5).prop_map(|k| 2 * k), seed in any::<u64>()) {
        let cfg = LambdaConfig::default_for(m);
        let check = plane_check(&cfg, 5, seed).unwrap();
        prop_assert!(check.passed());
    }
}
