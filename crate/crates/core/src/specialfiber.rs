//! Linear-algebra model of the special fiber `X_1 ∪_D X̃_2`.
//!
//! Middle classes of the two components are written over the block basis
//! `{H1, β} ⊕ {H2, Θ} ⊕ {HZ, Z_1..Z_{m+1}}`, where the last block is the
//! image of `H^{m-2}(Z)` in the blow-up `X̃_2`. Products on `X̃_2` follow
//! `(b, c)(b', c') = bb' − i_*(cc')`, so top intersections on the special fiber
//! are `∫aa' + ∫bb' − ∫cc'`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{int, kernel_basis, rank, same_span, solve, GMatrix, GaussRational, QMatrix, Rational};

/// Betti numbers of a smooth projective variety, indexed by real degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCohomology {
    pub name: String,
    pub dim: u32,
    pub ranks: Vec<u32>,
}

impl ComponentCohomology {
    /// One ambient class in each even degree plus `prim` extra middle classes.
    fn ambient_plus_middle(name: &str, dim: u32, prim: u32) -> Self {
        let ranks = (0..=2 * dim)
            .map(|k| match k {
                k if k % 2 == 1 && k == dim => prim,
                k if k % 2 == 1 => 0,
                k if k == dim => 1 + prim,
                _ => 1,
            })
            .collect();
        Self { name: name.into(), dim, ranks }
    }

    /// Alternating sum of ranks.
    pub fn euler_char(&self) -> i64 {
        self.ranks.iter().enumerate().map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) }).sum()
    }
}

/// Cohomology ranks of the pieces of the degeneration and the top
/// intersection numbers the fiber pairing is built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentTables {
    pub m: u32,
    pub x1: ComponentCohomology,
    pub x2: ComponentCohomology,
    pub d: ComponentCohomology,
    pub z: ComponentCohomology,
    pub x1_omega_top: i64,
    pub x1_beta_sq: i64,
    pub x2_omega_top: i64,
    pub x2_theta_sq: i64,
    pub d_omega_top: i64,
    pub z_omega_top: i64,
    /// `∫_Z z_i z_j = z_prim_sq · δ_ij`.
    pub z_prim_sq: i64,
}

impl ComponentTables {
    pub fn new(m: u32) -> Result<Self> {
        if m % 2 == 1 {
            return Err(Error::OddDimension(m));
        }
        if m < 2 {
            return Err(Error::DimensionOutOfRange { m, reason: "need m >= 2".into() });
        }
        Ok(Self {
            m,
            x1: ComponentCohomology::ambient_plus_middle("X1", m, 1),
            x2: ComponentCohomology::ambient_plus_middle("X2", m, 1),
            d: ComponentCohomology::ambient_plus_middle("D", m - 1, 0),
            z: ComponentCohomology::ambient_plus_middle("Z", m - 2, m + 1),
            x1_omega_top: 2,
            x1_beta_sq: 1,
            x2_omega_top: 2,
            x2_theta_sq: 1,
            d_omega_top: 2,
            z_omega_top: 4,
            z_prim_sq: 1,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiberLabel {
    H1,
    Beta,
    H2,
    Theta,
    HZ,
    /// `Z_i`, `1 <= i <= m+1`.
    Z(usize),
}

impl FiberLabel {
    pub fn index(self) -> usize {
        match self {
            FiberLabel::H1 => 0,
            FiberLabel::Beta => 1,
            FiberLabel::H2 => 2,
            FiberLabel::Theta => 3,
            FiberLabel::HZ => 4,
            FiberLabel::Z(i) => 4 + i,
        }
    }

    pub fn on_x1(self) -> bool {
        matches!(self, FiberLabel::H1 | FiberLabel::Beta)
    }

    pub fn all(m: u32) -> Vec<FiberLabel> {
        let mut v = vec![FiberLabel::H1, FiberLabel::Beta, FiberLabel::H2, FiberLabel::Theta, FiberLabel::HZ];
        v.extend((1..=m as usize + 1).map(FiberLabel::Z));
        v
    }
}

impl fmt::Display for FiberLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberLabel::H1 => write!(f, "H1"),
            FiberLabel::Beta => write!(f, "beta"),
            FiberLabel::H2 => write!(f, "H2"),
            FiberLabel::Theta => write!(f, "Theta"),
            FiberLabel::HZ => write!(f, "HZ"),
            FiberLabel::Z(i) => write!(f, "Z_{i}"),
        }
    }
}

pub fn fiber_basis_len(m: u32) -> usize {
    m as usize + 6
}

/// A class in `H^m(X_1) ⊕ H^m(X̃_2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberClass {
    pub m: u32,
    pub coeffs: Vec<GaussRational>,
}

impl FiberClass {
    pub fn zero(m: u32) -> Self {
        Self { m, coeffs: vec![GaussRational::zero(); fiber_basis_len(m)] }
    }

    pub fn basis(m: u32, label: FiberLabel) -> Self {
        let mut c = Self::zero(m);
        c.coeffs[label.index()] = GaussRational::one();
        c
    }

    pub fn from_rational(m: u32, v: &[Rational]) -> Self {
        Self { m, coeffs: v.iter().cloned().map(GaussRational::real).collect() }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        Self { m: self.m, coeffs }
    }

    pub fn minus(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect();
        Self { m: self.m, coeffs }
    }

    pub fn scaled(&self, s: &GaussRational) -> Self {
        Self { m: self.m, coeffs: self.coeffs.iter().map(|a| a.clone() * s.clone()).collect() }
    }

    pub fn coeff(&self, label: FiberLabel) -> &GaussRational {
        &self.coeffs[label.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Keeps only the `X_1` (or only the `X̃_2`) block.
    pub fn restrict(&self, to_x1: bool) -> Self {
        let mut out = self.clone();
        for label in FiberLabel::all(self.m) {
            if label.on_x1() != to_x1 {
                out.coeffs[label.index()] = GaussRational::zero();
            }
        }
        out
    }
}

impl fmt::Display for FiberClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = FiberLabel::all(self.m)
            .into_iter()
            .filter(|l| !self.coeff(*l).is_zero())
            .map(|l| {
                let c = self.coeff(l);
                if c.is_one() {
                    l.to_string()
                } else if c.re.is_zero() && c.im == -Rational::one() {
                    format!("-i*{l}")
                } else if c.re.is_zero() && c.im.is_one() {
                    format!("i*{l}")
                } else {
                    format!("({c})*{l}")
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Coefficient of `ω_D^{m/2}` in the restriction of each basis class to `D`.
pub fn restriction_table(m: u32) -> Vec<(FiberLabel, Rational)> {
    FiberLabel::all(m)
        .into_iter()
        .map(|l| {
            let c = match l {
                FiberLabel::H1 | FiberLabel::H2 => int(1),
                FiberLabel::HZ => int(2),
                _ => int(0),
            };
            (l, c)
        })
        .collect()
}

/// `γ(a, b) = a|_D − b|_D` as a one-row matrix.
pub fn gamma(m: u32) -> QMatrix {
    let row: Vec<Rational> = restriction_table(m).into_iter().map(|(l, c)| if l.on_x1() { c } else { -c }).collect();
    QMatrix::from_vec(1, row.len(), row).expect("row")
}

pub fn apply_gamma(x: &FiberClass) -> GaussRational {
    let g = gamma(x.m);
    g.row(0)
        .iter()
        .zip(&x.coeffs)
        .fold(GaussRational::zero(), |acc, (a, b)| acc + GaussRational::real(a.clone()) * b.clone())
}

/// Null-space basis of `γ`.
pub fn mv_kernel(m: u32) -> Vec<FiberClass> {
    kernel_basis(&gamma(m)).iter().map(|v| FiberClass::from_rational(m, v)).collect()
}

/// The named kernel basis, in the order `(H1,H2), (H1,HZ−H2), (β,0), (0,Θ), (0,Z_i)`.
pub fn named_basis(m: u32) -> Vec<(String, FiberClass)> {
    let b = |l| FiberClass::basis(m, l);
    let mut v = vec![
        ("(H1,H2)".to_string(), b(FiberLabel::H1).plus(&b(FiberLabel::H2))),
        ("(H1,HZ-H2)".to_string(), b(FiberLabel::H1).plus(&b(FiberLabel::HZ)).minus(&b(FiberLabel::H2))),
        ("(beta,0)".to_string(), b(FiberLabel::Beta)),
        ("(0,Theta)".to_string(), b(FiberLabel::Theta)),
    ];
    v.extend((1..=m as usize + 1).map(|i| (format!("(0,Z_{i})"), b(FiberLabel::Z(i)))));
    v
}

/// Whether the computed kernel and the named basis span the same space.
pub fn kernel_matches_named_basis(m: u32) -> Result<bool> {
    let n = fiber_basis_len(m);
    let k: Vec<Vec<GaussRational>> = mv_kernel(m).into_iter().map(|c| c.coeffs).collect();
    let l: Vec<Vec<GaussRational>> = named_basis(m).into_iter().map(|(_, c)| c.coeffs).collect();
    Ok(k.len() == l.len() && same_span(n, &k, &l)?)
}

/// Bilinear products of basis classes in top degree.
pub fn product_table(t: &ComponentTables) -> QMatrix {
    let m = t.m;
    let n = fiber_basis_len(m);
    let mut p = QMatrix::zeros(n, n);
    let set = |p: &mut QMatrix, a: FiberLabel, b: FiberLabel, v: i64| {
        p[(a.index(), b.index())] = int(v);
        p[(b.index(), a.index())] = int(v);
    };
    set(&mut p, FiberLabel::H1, FiberLabel::H1, t.x1_omega_top);
    set(&mut p, FiberLabel::Beta, FiberLabel::Beta, t.x1_beta_sq);
    set(&mut p, FiberLabel::H2, FiberLabel::H2, t.x2_omega_top);
    set(&mut p, FiberLabel::Theta, FiberLabel::Theta, t.x2_theta_sq);
    // Classes pushed forward from Z pair through −∫_Z.
    set(&mut p, FiberLabel::HZ, FiberLabel::HZ, -t.z_omega_top);
    for i in 1..=m as usize + 1 {
        set(&mut p, FiberLabel::Z(i), FiberLabel::Z(i), -t.z_prim_sq);
    }
    p
}

pub fn fiber_pairing(x: &FiberClass, y: &FiberClass) -> Result<GaussRational> {
    if x.m != y.m {
        return Err(Error::ShapeMismatch("fiber classes of different m".into()));
    }
    let p = product_table(&ComponentTables::new(x.m)?).to_gauss();
    p.bilinear(&x.coeffs, &y.coeffs)
}

/// Gram of the fiber pairing on the named kernel basis.
pub fn fiber_gram(m: u32) -> Result<QMatrix> {
    let basis = named_basis(m);
    let n = basis.len();
    let mut g = QMatrix::zeros(n, n);
    for (i, (_, x)) in basis.iter().enumerate() {
        for (j, (_, y)) in basis.iter().enumerate() {
            let v = fiber_pairing(x, y)?;
            debug_assert!(v.is_real());
            g[(i, j)] = v.re;
        }
    }
    Ok(g)
}

/// The tabulated pairing: `diag(4, 0, 1, 1, −1, …, −1)`.
pub fn expected_fiber_gram(m: u32) -> QMatrix {
    let mut d = vec![int(4), int(0), int(1), int(1)];
    d.extend((0..=m).map(|_| int(-1)));
    QMatrix::diagonal(&d)
}

/// Restriction from the special fiber to the generic fiber, in the named
/// kernel basis (source) and `ω^{m/2}, e_1, …, e_{m+3}` (target).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionMap {
    pub m: u32,
    pub source_labels: Vec<String>,
    pub target_labels: Vec<String>,
    pub matrix: GMatrix,
    /// `⟨ω,ω⟩ = 4`, `⟨e_i,e_i⟩ = −1` for `i <= m+1`, `+1` for `e_{m+2}, e_{m+3}`.
    pub target_gram: QMatrix,
}

pub fn restriction_map(m: u32) -> Result<RestrictionMap> {
    ComponentTables::new(m)?;
    let mu = m as usize;
    let source = named_basis(m);
    let rows = mu + 4;
    let mut matrix = GMatrix::zeros(rows, source.len());
    // (H1,H2) ↦ ω
    matrix[(0, 0)] = GaussRational::one();
    // (H1,HZ−H2) ↦ 0
    // (β,0) ↦ e_{m+2}, (0,Θ) ↦ e_{m+3}
    matrix[(mu + 2, 2)] = GaussRational::one();
    matrix[(mu + 3, 3)] = GaussRational::one();
    // (0,Z_i) ↦ √−1 e_i
    for i in 1..=mu + 1 {
        matrix[(i, 3 + i)] = GaussRational::i();
    }
    let mut tg = vec![int(4)];
    tg.extend((0..=mu).map(|_| int(-1)));
    tg.extend([int(1), int(1)]);
    let mut target_labels = vec![format!("omega^{}", m / 2)];
    target_labels.extend((1..=mu + 3).map(|i| format!("e_{i}")));
    Ok(RestrictionMap {
        m,
        source_labels: source.into_iter().map(|(s, _)| s).collect(),
        target_labels,
        matrix,
        target_gram: QMatrix::diagonal(&tg),
    })
}

fn hermitian(g: &GMatrix, x: &[GaussRational], y: &[GaussRational]) -> Result<GaussRational> {
    let xc: Vec<GaussRational> = x.iter().map(GaussRational::conj).collect();
    g.bilinear(&xc, y)
}

impl RestrictionMap {
    /// Coordinates of a kernel class in the named basis.
    pub fn source_coordinates(&self, x: &FiberClass) -> Option<Vec<GaussRational>> {
        let cols: Vec<Vec<GaussRational>> = named_basis(self.m).into_iter().map(|(_, c)| c.coeffs).collect();
        let b = GMatrix::from_columns(fiber_basis_len(self.m), &cols).ok()?;
        solve(&b, &x.coeffs)
    }

    pub fn apply(&self, x: &FiberClass) -> Result<Vec<GaussRational>> {
        let coords = self
            .source_coordinates(x)
            .ok_or_else(|| Error::ShapeMismatch(format!("{x} is not in the kernel of gamma")))?;
        self.matrix.apply(&coords)
    }

    pub fn rank(&self) -> usize {
        rank(&self.matrix)
    }

    pub fn kernel(&self) -> Vec<Vec<GaussRational>> {
        kernel_basis(&self.matrix)
    }

    /// Checks `⟨x, y⟩_fiber = ⟨r(x), r(y)⟩` on every pair of basis classes
    /// for the sesquilinear extension `Σ conj(u_a) G_ab v_b` of `target_gram`.
    pub fn preserves_pairing_hermitian(&self) -> Result<bool> {
        self.preserves_with(&self.target_gram, true)
    }

    /// Same check with the complex-bilinear extension against `gram`.
    pub fn preserves_pairing_bilinear(&self, gram: &QMatrix) -> Result<bool> {
        self.preserves_with(gram, false)
    }

    fn preserves_with(&self, gram: &QMatrix, conjugate: bool) -> Result<bool> {
        let fg = fiber_gram(self.m)?;
        let g = gram.to_gauss();
        let n = self.matrix.cols();
        for a in 0..n {
            for b in 0..n {
                let (ra, rb) = (self.matrix.column(a), self.matrix.column(b));
                let v = if conjugate { hermitian(&g, &ra, &rb)? } else { g.bilinear(&ra, &rb)? };
                if v != GaussRational::real(fg[(a, b)].clone()) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Preimage of the target basis vector `e_index` (`1..=m+3`) in the span
    /// of the named classes other than `(H1, HZ−H2)`.
    pub fn preimage(&self, index: usize) -> Result<FiberClass> {
        let max = self.m as usize + 3;
        if index == 0 || index > max {
            return Err(Error::IndexOutOfRange { index, max });
        }
        let basis = named_basis(self.m);
        let keep: Vec<usize> = (0..basis.len()).filter(|&j| j != 1).collect();
        let reduced = GMatrix::from_fn(self.matrix.rows(), keep.len(), |i, j| self.matrix[(i, keep[j])].clone());
        let mut target = vec![GaussRational::zero(); self.matrix.rows()];
        target[index] = GaussRational::one();
        let coords =
            solve(&reduced, &target).ok_or_else(|| Error::ShapeMismatch(format!("e_{index} not in the image")))?;
        let mut out = FiberClass::zero(self.m);
        for (c, &j) in coords.iter().zip(&keep) {
            out = out.plus(&basis[j].1.scaled(c));
        }
        Ok(out)
    }
}

/// `ẽ_i|_{X_1}` for the lifted insertion `e_i`.
pub fn x1_restriction(m: u32, index: usize) -> Result<FiberClass> {
    Ok(restriction_map(m)?.preimage(index)?.restrict(true))
}

/// `ẽ_i|_{X̃_2}` for the lifted insertion `e_i`.
pub fn x2_restriction(m: u32, index: usize) -> Result<FiberClass> {
    Ok(restriction_map(m)?.preimage(index)?.restrict(false))
}
