use qpencil::smoothcheck::{enumerate_points, Family, FamilyParams, Fp, Poly, PolySystem};

/// Points of the smooth quadric `Σ x_i² = 0` in `P^{n-1}(F_q)`.
fn smooth_quadric_count(n: u32, q: u64) -> u64 {
    let base = (q.pow(n - 1) - 1) / (q - 1);
    if n % 2 == 1 {
        return base;
    }
    // Split iff (−1)^{n/2} is a square mod q.
    let split = (n / 2).is_multiple_of(2) || q % 4 == 1;
    let tail = q.pow(n / 2 - 1);
    if split {
        base + tail
    } else {
        base - tail
    }
}

fn quadric(n: usize) -> PolySystem {
    let names = (0..n).map(|i| format!("x{i}")).collect();
    PolySystem::new("Q", names, n, vec![("q".into(), Poly::diagonal_quadric(n, &vec![1; n]))]).unwrap()
}

#[test]
fn quadric_counts_match_the_closed_form() {
    for p in [3u64, 5, 7, 11] {
        let f = Fp::new(p).unwrap();
        for n in 3..=6usize {
            let pts = enumerate_points(&quadric(n), f, u128::MAX).unwrap();
            assert_eq!(pts.len() as u64, smooth_quadric_count(n as u32, p), "n = {n}, p = {p}");
        }
    }
}

#[test]
fn quadric_in_p6_over_f5() {
    let f = Fp::new(5).unwrap();
    assert_eq!(enumerate_points(&quadric(7), f, u128::MAX).unwrap().len(), 3906);
    assert_eq!(enumerate_points(&quadric(6), f, u128::MAX).unwrap().len(), 806);
}

#[test]
fn hyperplane_sections_of_the_family() {
    // X_1 = {f_1 = g_1 = 0} is a smooth quadric in P^{m+1}.
    let params = FamilyParams {
        m: 4,
        p: 7,
        lambda: (0..7).collect(),
        g1: vec![1, 0, 0, 0, 0, 0, 0],
        g2: vec![0, 1, 0, 0, 0, 0, 0],
    };
    let fam = Family::new(params).unwrap();
    let f = fam.field();
    assert_eq!(enumerate_points(&fam.x1(), f, u128::MAX).unwrap().len() as u64, smooth_quadric_count(6, 7));
    assert_eq!(enumerate_points(&fam.d(), f, u128::MAX).unwrap().len() as u64, smooth_quadric_count(5, 7));
}
