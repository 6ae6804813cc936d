//! The double cover of the Salvetti complex of
//! `G = Z^{c_0} * ... * Z^{c_s} * Z^d`, its (-1)-eigenspace `V_{-1}` in first
//! homology, and the action of partial conjugations on it.
//!
//! Generators are numbered factor by factor: the `c_0` generators of `Z_0`,
//! then `Z_1`, ..., then the `Y` factor `y_1..y_k, x` with `x` last. The map
//! `π : G -> Z/2` kills `Y` and sends every `Z` generator to `g`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, rat::RatMatrix, IntVec};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeProductShape {
    pub c: Vec<usize>,
    pub d: usize,
}

impl FreeProductShape {
    pub fn new(c: Vec<usize>, d: usize) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::InvalidShape("need at least one class Z_0".into()));
        }
        if c.iter().any(|&ci| ci == 0) || d == 0 {
            return Err(Error::InvalidShape("factor sizes must be positive".into()));
        }
        Ok(FreeProductShape { c, d })
    }

    /// Parses `c0,c1,...:d`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidShape(format!("expected `c0,c1,...:d`, got `{s}`"));
        let (cs, d) = s.split_once(':').ok_or_else(bad)?;
        let c = cs
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let d = d.trim().parse::<usize>().map_err(|_| bad())?;
        Self::new(c, d)
    }

    pub fn s(&self) -> usize {
        self.c.len() - 1
    }

    pub fn k(&self) -> usize {
        self.d - 1
    }

    /// Number of factors including `Y`.
    pub fn factors(&self) -> usize {
        self.c.len() + 1
    }

    pub fn y_factor(&self) -> usize {
        self.c.len()
    }

    pub fn generators(&self) -> usize {
        self.c.iter().sum::<usize>() + self.d
    }

    pub fn factor_start(&self, f: usize) -> usize {
        self.c[..f.min(self.c.len())].iter().sum()
    }

    pub fn factor_size(&self, f: usize) -> usize {
        if f == self.y_factor() {
            self.d
        } else {
            self.c[f]
        }
    }

    pub fn factor_of(&self, a: usize) -> usize {
        let mut start = 0;
        for (i, &ci) in self.c.iter().enumerate() {
            if a < start + ci {
                return i;
            }
            start += ci;
        }
        self.y_factor()
    }

    pub fn x(&self) -> usize {
        self.generators() - 1
    }

    /// Generator `y_j`, `1 <= j <= k`.
    pub fn y(&self, j: usize) -> usize {
        self.factor_start(self.y_factor()) + j - 1
    }

    /// The first generator of `Z_i`.
    pub fn z(&self, i: usize) -> usize {
        self.factor_start(i)
    }

    pub fn flips(&self, a: usize) -> bool {
        self.factor_of(a) != self.y_factor()
    }

    /// `d + s`.
    pub fn vm1_dim(&self) -> usize {
        self.d + self.s()
    }

    pub fn label(&self, a: usize) -> String {
        let f = self.factor_of(a);
        if f == self.y_factor() {
            if a == self.x() {
                "x".into()
            } else {
                format!("y{}", a - self.factor_start(f) + 1)
            }
        } else {
            format!("z{}.{}", f, a - self.factor_start(f))
        }
    }

    pub fn factor_label(&self, f: usize) -> String {
        if f == self.y_factor() {
            "Y".into()
        } else {
            format!("Z{f}")
        }
    }

    /// Every shape with `s <= max_s`, `c_i <= max_c` and `d <= max_d`.
    pub fn enumerate(max_s: usize, max_c: usize, max_d: usize) -> Vec<FreeProductShape> {
        let mut out = Vec::new();
        for s in 0..=max_s {
            let mut c = vec![1; s + 1];
            loop {
                for d in 1..=max_d {
                    out.push(FreeProductShape { c: c.clone(), d });
                }
                let mut i = 0;
                while i <= s && c[i] == max_c {
                    c[i] = 1;
                    i += 1;
                }
                if i > s {
                    break;
                }
                c[i] += 1;
            }
        }
        out
    }
}

impl std::fmt::Display for FreeProductShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let cs: Vec<String> = self.c.iter().map(|c| c.to_string()).collect();
        write!(f, "{}:{}", cs.join(","), self.d)
    }
}

/// Cellular chain complex of the double cover. One-cell `e_a` has index `a`
/// and `g e_a` index `N + a`; zero-cells are the two lifts `1` and `g` of the
/// base point. Matrices act on column vectors.
#[derive(Clone, Debug)]
pub struct CoverComplex {
    pub shape: FreeProductShape,
    /// Pairs `(a, b)`, `a < b`, in the same factor; each has a two-cell on
    /// both sheets, sheet 1 at index `2p` and sheet `g` at `2p + 1`.
    pub pairs: Vec<(usize, usize)>,
    /// `2 x 2N`.
    pub d1: Vec<Vec<i64>>,
    /// `2N x 2P`.
    pub d2: Vec<Vec<i64>>,
    /// Deck transformation on cells of dimension 0, 1, 2, as permutations.
    pub g0: Vec<usize>,
    pub g1: Vec<usize>,
    pub g2: Vec<usize>,
}

/// Letters `(generator, ±1)`.
pub type GWord = Vec<(usize, i8)>;

/// One-chain traced by a lift of `w` starting on `sheet` (0 for `1`,
/// 1 for `g`).
pub fn lift_word(shape: &FreeProductShape, w: &[(usize, i8)], sheet: usize) -> Vec<i64> {
    let n = shape.generators();
    let mut chain = vec![0i64; 2 * n];
    let mut s = sheet;
    for &(a, e) in w {
        let t = if shape.flips(a) { 1 - s } else { s };
        if e > 0 {
            chain[a + s * n] += 1;
        } else {
            chain[a + t * n] -= 1;
        }
        s = t;
    }
    chain
}

pub fn build_cover_complex(shape: &FreeProductShape) -> CoverComplex {
    let n = shape.generators();
    let mut pairs = Vec::new();
    for f in 0..shape.factors() {
        let start = shape.factor_start(f);
        let size = shape.factor_size(f);
        for a in start..start + size {
            for b in a + 1..start + size {
                pairs.push((a, b));
            }
        }
    }
    let mut d1 = vec![vec![0i64; 2 * n]; 2];
    for a in 0..n {
        for s in 0..2 {
            if shape.flips(a) {
                d1[1 - s][a + s * n] += 1;
                d1[s][a + s * n] -= 1;
            }
        }
    }
    let mut d2 = vec![vec![0i64; 2 * pairs.len()]; 2 * n];
    for (p, &(a, b)) in pairs.iter().enumerate() {
        for s in 0..2 {
            let boundary = lift_word(shape, &[(a, 1), (b, 1), (a, -1), (b, -1)], s);
            for (i, &v) in boundary.iter().enumerate() {
                d2[i][2 * p + s] = v;
            }
        }
    }
    let g0 = vec![1, 0];
    let g1 = (0..2 * n).map(|i| (i + n) % (2 * n)).collect();
    let g2 = (0..2 * pairs.len()).map(|i| i ^ 1).collect();
    CoverComplex {
        shape: shape.clone(),
        pairs,
        d1,
        d2,
        g0,
        g1,
        g2,
    }
}

fn columns(m: &[Vec<i64>]) -> Vec<IntVec> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|r| BigInt::from(r[j])).collect())
        .collect()
}

fn rows_big(m: &[Vec<i64>]) -> Vec<IntVec> {
    m.iter().map(|r| linalg::ints(r)).collect()
}

impl CoverComplex {
    pub fn one_cells(&self) -> usize {
        2 * self.shape.generators()
    }

    pub fn two_cells(&self) -> usize {
        2 * self.pairs.len()
    }

    /// `∂1 ∂2 = 0`, `g^2 = 1`, and `g` commutes with both boundaries.
    pub fn check_invariants(&self) -> bool {
        let n1 = self.one_cells();
        let n2 = self.two_cells();
        for j in 0..n2 {
            for i in 0..2 {
                let s: i64 = (0..n1).map(|k| self.d1[i][k] * self.d2[k][j]).sum();
                if s != 0 {
                    return false;
                }
            }
        }
        let inv = |p: &Vec<usize>| p.iter().enumerate().all(|(i, &j)| p[j] == i);
        if !inv(&self.g0) || !inv(&self.g1) || !inv(&self.g2) {
            return false;
        }
        // g ∂ = ∂ g, with permutation matrices P e_i = e_{p(i)}.
        for j in 0..n1 {
            for i in 0..2 {
                if self.d1[self.g0[i]][self.g1[j]] != self.d1[i][j] {
                    return false;
                }
            }
        }
        for j in 0..n2 {
            for i in 0..n1 {
                if self.d2[self.g1[i]][self.g2[j]] != self.d2[i][j] {
                    return false;
                }
            }
        }
        true
    }

    /// `(1 - g) e_a` in one-chain coordinates.
    pub fn zeta(&self, a: usize) -> Vec<i64> {
        let n = self.shape.generators();
        let mut v = vec![0i64; 2 * n];
        v[a] += 1;
        v[a + n] -= 1;
        v
    }

    /// Basis `z_1..z_s, y_1..y_k, x` of `V_{-1}` as one-chains.
    pub fn vm1_basis(&self) -> Vec<Vec<i64>> {
        let sh = &self.shape;
        let mut out = Vec::new();
        for i in 1..=sh.s() {
            let a = self.zeta(sh.z(0));
            let b = self.zeta(sh.z(i));
            out.push(a.iter().zip(&b).map(|(p, q)| p - q).collect());
        }
        for j in 1..=sh.k() {
            out.push(self.zeta(sh.y(j)));
        }
        out.push(self.zeta(sh.x()));
        out
    }

    /// `(dim H_1, dim V_{-1})` from ranks of the boundary maps.
    pub fn direct_ranks(&self) -> (usize, usize) {
        let n1 = self.one_cells();
        let n = self.shape.generators();
        let r1 = linalg::rank(&rows_big(&self.d1), n1);
        let r2 = linalg::rank(&columns(&self.d2), n1);
        let h1 = n1 - r1 - r2;
        // Restrict to the (-1)-eigenspaces spanned by c - g c.
        let d1_minus: Vec<IntVec> = (0..n)
            .map(|a| {
                let z = self.zeta(a);
                (0..2)
                    .map(|i| BigInt::from((0..n1).map(|k| self.d1[i][k] * z[k]).sum::<i64>()))
                    .collect()
            })
            .collect();
        let r1m = linalg::rank(&d1_minus, 2);
        let n2 = self.two_cells();
        let d2_minus: Vec<IntVec> = (0..n2 / 2)
            .map(|p| {
                (0..n1)
                    .map(|i| BigInt::from(self.d2[i][2 * p] - self.d2[i][2 * p + 1]))
                    .collect()
            })
            .collect();
        let r2m = linalg::rank(&d2_minus, n1);
        (h1, n - r1m - r2m)
    }
}

/// `(dim H_1, dim V_{-1})`, computed from the closed forms
/// `Σc_i + s + 2d` and `d + s` and checked against rank computations.
pub fn homology_dims(cx: &CoverComplex) -> Result<(usize, usize)> {
    let sh = &cx.shape;
    let symbolic = (sh.c.iter().sum::<usize>() + sh.s() + 2 * sh.d, sh.vm1_dim());
    let direct = cx.direct_ranks();
    if symbolic != direct {
        return Err(Error::Invariant(format!(
            "homology of cover for shape {sh}: closed form {symbolic:?}, ranks {direct:?}"
        )));
    }
    Ok(symbolic)
}

/// Fix the sign so the first nonzero entry of the first nonzero column is
/// positive.
pub fn canonical_sign(m: &RatMatrix) -> RatMatrix {
    let n = m.len();
    let cols = if n == 0 { 0 } else { m[0].len() };
    for j in 0..cols {
        for i in 0..n {
            if !m[i][j].is_zero() {
                if m[i][j].is_negative() {
                    return m.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
                }
                return m.clone();
            }
        }
    }
    m.clone()
}

fn int_matrix(m: &[Vec<i64>]) -> RatMatrix {
    linalg::rat::from_i64(m)
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

fn check_support(shape: &FreeProductShape, multiplier: usize, support: &[usize]) -> Result<()> {
    if multiplier >= shape.generators() {
        return Err(Error::InvalidShape(format!("no generator {multiplier}")));
    }
    let own = shape.factor_of(multiplier);
    for &f in support {
        if f >= shape.factors() {
            return Err(Error::InvalidShape(format!("no factor {f}")));
        }
        if f == own {
            return Err(Error::InvalidShape("support contains the multiplier's factor".into()));
        }
    }
    Ok(())
}

/// Closed-form matrices of partial conjugations on the basis
/// `z_1..z_s, y_1..y_k, x`, acting on columns:
///
/// * multiplier `x` or `y_j`: `z_i ↦ z_i + 2(w_i - w_0) m`, other basis
///   vectors fixed, where `w_i = [Z_i ⊆ D]`;
/// * multiplier in `Z_m`, `m >= 1`, with `Z_0 ⊄ D`: `z_i ↦ z_i - 2 w_i z_m`,
///   and `y_j, x ↦ -y_j, -x` when `Y ⊆ D`; a support containing `Z_0` is
///   replaced by its complement, which inverts the matrix;
/// * multiplier in `Z_0`: identity.
///
/// The result is sign-canonical.
pub fn rho_pi_pc(shape: &FreeProductShape, multiplier: usize, support: &[usize]) -> Result<RatMatrix> {
    check_support(shape, multiplier, support)?;
    let dim = shape.vm1_dim();
    let s = shape.s();
    let own = shape.factor_of(multiplier);
    let inside = |f: usize| support.contains(&f);
    let mut m = identity(dim);
    if own == shape.y_factor() {
        let row = if multiplier == shape.x() {
            dim - 1
        } else {
            s + (multiplier - shape.factor_start(own))
        };
        let w0 = inside(0) as i64;
        for i in 1..=s {
            m[row][i - 1] += 2 * (inside(i) as i64 - w0);
        }
        return Ok(canonical_sign(&int_matrix(&m)));
    }
    if own == 0 {
        return Ok(int_matrix(&m));
    }
    let complement = inside(0);
    let d: Vec<usize> = if complement {
        (0..shape.factors()).filter(|&f| f != own && !inside(f)).collect()
    } else {
        support.to_vec()
    };
    for i in 1..=s {
        if d.contains(&i) {
            m[own - 1][i - 1] -= 2;
        }
    }
    if d.contains(&shape.y_factor()) {
        for j in s..dim {
            m[j][j] = -1;
        }
    }
    let mut out = int_matrix(&m);
    if complement {
        out = invert(&out).expect("partial conjugation matrices are invertible");
    }
    Ok(canonical_sign(&out))
}

/// Exact inverse by Gauss-Jordan over the rationals.
pub fn invert(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, p);
        let pv = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &pv;
        }
        let prow = a[col].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Images of the generators under `π^m_D`, `D` a set of factors.
pub fn pc_images(shape: &FreeProductShape, multiplier: usize, support: &[usize]) -> Vec<GWord> {
    (0..shape.generators())
        .map(|a| {
            if support.contains(&shape.factor_of(a)) {
                vec![(multiplier, -1), (a, 1), (multiplier, 1)]
            } else {
                vec![(a, 1)]
            }
        })
        .collect()
}

/// Coordinates on `V_{-1}` of one-cycles modulo `im ∂2`.
pub struct Vm1Coordinates {
    cx: CoverComplex,
    basis: Vec<Vec<i64>>,
    /// Row `j` pairs with a chain to give `pivot_j` times its `j`-th coordinate.
    extract: Vec<IntVec>,
    pivots: Vec<BigInt>,
    /// Rows that vanish on every chain in `span(basis) + im ∂2`.
    annihilators: Vec<IntVec>,
}

impl Vm1Coordinates {
    pub fn new(cx: &CoverComplex) -> Result<Self> {
        let basis = cx.vm1_basis();
        let n1 = cx.one_cells();
        let dim = basis.len();
        let mut gens: Vec<Vec<i64>> = basis.clone();
        for j in 0..cx.two_cells() {
            gens.push((0..n1).map(|i| cx.d2[i][j]).collect());
        }
        let m = gens.len();
        // Row-reduce [B | I] where B has the generating chains as columns.
        let rows: Vec<IntVec> = (0..n1)
            .map(|i| {
                let mut r: IntVec = gens.iter().map(|c| BigInt::from(c[i])).collect();
                r.extend((0..n1).map(|j| BigInt::from((i == j) as i64)));
                r
            })
            .collect();
        let e = linalg::reduced_echelon(&rows, m + n1);
        let mut extract = vec![Vec::new(); dim];
        let mut pivots = vec![BigInt::zero(); dim];
        let mut annihilators = Vec::new();
        for (row, &p) in e.rows.iter().zip(&e.pivots) {
            if p < dim {
                if row[dim..m].iter().any(|x| !x.is_zero()) {
                    return Err(Error::Invariant("basis of V_{-1} meets im ∂2".into()));
                }
                extract[p] = row[m..].to_vec();
                pivots[p] = row[p].clone();
            } else if p >= m {
                annihilators.push(row[m..].to_vec());
            }
        }
        if pivots.iter().any(|p| p.is_zero()) {
            return Err(Error::Invariant("basis of V_{-1} is dependent modulo im ∂2".into()));
        }
        Ok(Vm1Coordinates {
            cx: cx.clone(),
            basis,
            extract,
            pivots,
            annihilators,
        })
    }

    pub fn complex(&self) -> &CoverComplex {
        &self.cx
    }

    /// Coordinates of a chain, or `None` if it is not in `V_{-1} + im ∂2`.
    pub fn coordinates(&self, chain: &[i64]) -> Option<Vec<BigRational>> {
        let c = linalg::ints(chain);
        if self.annihilators.iter().any(|a| !linalg::dot(a, &c).is_zero()) {
            return None;
        }
        Some(
            self.extract
                .iter()
                .zip(&self.pivots)
                .map(|(row, p)| BigRational::new(linalg::dot(row, &c), p.clone()))
                .collect(),
        )
    }

    /// Matrix of the automorphism with generator images `images`, computed by
    /// pushing each basis cycle through the induced chain map.
    pub fn action(&self, images: &[GWord]) -> Result<RatMatrix> {
        let sh = &self.cx.shape;
        let n = sh.generators();
        let n1 = 2 * n;
        let lifts: Vec<Vec<i64>> = (0..n1).map(|cell| lift_word(sh, &images[cell % n], cell / n)).collect();
        let dim = self.basis.len();
        let mut m = vec![vec![BigRational::zero(); dim]; dim];
        for (j, b) in self.basis.iter().enumerate() {
            let mut image = vec![0i64; n1];
            for (cell, &coef) in b.iter().enumerate() {
                if coef != 0 {
                    for (t, &v) in image.iter_mut().zip(&lifts[cell]) {
                        *t += coef * v;
                    }
                }
            }
            let coords = self
                .coordinates(&image)
                .ok_or_else(|| Error::Invariant(format!("image of basis vector {j} leaves V_{{-1}}")))?;
            for (i, c) in coords.into_iter().enumerate() {
                m[i][j] = c;
            }
        }
        Ok(m)
    }
}

/// Chain-level matrix of `π^m_D`, sign-canonical.
pub fn rho_pi_chain(coords: &Vm1Coordinates, multiplier: usize, support: &[usize]) -> Result<RatMatrix> {
    check_support(&coords.cx.shape, multiplier, support)?;
    let images = pc_images(&coords.cx.shape, multiplier, support);
    Ok(canonical_sign(&coords.action(&images)?))
}

#[derive(Clone, Debug)]
pub struct ActionMismatch {
    pub multiplier: usize,
    pub support: Vec<usize>,
    pub closed_form: RatMatrix,
    pub chain_level: RatMatrix,
}

#[derive(Clone, Debug)]
pub struct ActionTableReport {
    pub shape: FreeProductShape,
    pub checked: usize,
    pub mismatches: Vec<ActionMismatch>,
}

/// Nonempty sets of factors avoiding `own`.
pub fn supports_avoiding(shape: &FreeProductShape, own: usize) -> Vec<Vec<usize>> {
    let others: Vec<usize> = (0..shape.factors()).filter(|&f| f != own).collect();
    (1u32..1 << others.len())
        .map(|mask| {
            others
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &f)| f)
                .collect()
        })
        .collect()
}

/// Compares [`rho_pi_pc`] against [`rho_pi_chain`] for every multiplier and
/// every nonempty support.
pub fn verify_action_table(shape: &FreeProductShape) -> Result<ActionTableReport> {
    let cx = build_cover_complex(shape);
    let coords = Vm1Coordinates::new(&cx)?;
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for a in 0..shape.generators() {
        for support in supports_avoiding(shape, shape.factor_of(a)) {
            checked += 1;
            let closed_form = rho_pi_pc(shape, a, &support)?;
            let chain_level = rho_pi_chain(&coords, a, &support)?;
            if closed_form != chain_level {
                mismatches.push(ActionMismatch {
                    multiplier: a,
                    support,
                    closed_form,
                    chain_level,
                });
            }
        }
    }
    Ok(ActionTableReport {
        shape: shape.clone(),
        checked,
        mismatches,
    })
}

/// The matrix with `-2` across the `x` row under the `z` columns.
pub fn expected_x_on_z0(shape: &FreeProductShape) -> RatMatrix {
    let dim = shape.vm1_dim();
    let mut m = identity(dim);
    for i in 0..shape.s() {
        m[dim - 1][i] = -2;
    }
    int_matrix(&m)
}

pub fn is_identity(m: &RatMatrix) -> bool {
    m.iter()
        .enumerate()
        .all(|(i, r)| r.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() }))
}
