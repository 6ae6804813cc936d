//! Exact integer and rational linear algebra.
//!
//! Elimination is fraction-free: rows are combined as `p*r - a*s` and then
//! divided by their content, so every intermediate value stays integral.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntVec = Vec<BigInt>;
pub type RatVec = Vec<BigRational>;

pub fn ints(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn int_rows(rows: &[Vec<i64>]) -> Vec<IntVec> {
    rows.iter().map(|r| ints(r)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[BigRational], b: &[BigInt]) -> BigRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * BigRational::from_integer(y.clone()))
        .fold(BigRational::zero(), |acc, t| acc + t)
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Divide by the content and make the first nonzero entry positive.
pub fn primitive(v: &[BigInt]) -> IntVec {
    let g = content(v);
    if g.is_zero() {
        return v.to_vec();
    }
    let mut out: IntVec = v.iter().map(|x| x / &g).collect();
    if let Some(first) = out.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in out.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    out
}

/// Clear denominators of a rational vector and return its primitive form.
pub fn primitive_of_rational(v: &[BigRational]) -> IntVec {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let scaled: IntVec = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    primitive(&scaled)
}

/// Reduced echelon form over the integers: every pivot column is zero
/// outside its pivot row, rows are primitive.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<IntVec>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn reduced_echelon(rows: &[IntVec], ncols: usize) -> Echelon {
    let mut m: Vec<IntVec> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        if top == m.len() {
            break;
        }
        // Smallest absolute pivot keeps numbers down.
        let pick = (top..m.len())
            .filter(|&i| !m[i][col].is_zero())
            .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()));
        let Some(p) = pick else { continue };
        m.swap(top, p);
        let prow = m[top].clone();
        let pv = prow[col].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == top || row[col].is_zero() {
                continue;
            }
            let a = row[col].clone();
            let g = pv.gcd(&a);
            let (mp, ma) = (&pv / &g, &a / &g);
            for (x, y) in row.iter_mut().zip(&prow) {
                *x = &mp * &*x - &ma * y;
            }
            let c = content(row);
            if !c.is_zero() && !c.is_one() {
                for x in row.iter_mut() {
                    *x = &*x / &c;
                }
            }
        }
        pivots.push(col);
        top += 1;
    }
    m.truncate(top);
    for row in m.iter_mut() {
        *row = primitive(row);
    }
    Echelon { rows: m, pivots, ncols }
}

pub fn rank(rows: &[IntVec], ncols: usize) -> usize {
    reduced_echelon(rows, ncols).rank()
}

/// Primitive integer basis of `{f : r·f = 0 for every row r}`.
pub fn nullspace(rows: &[IntVec], ncols: usize) -> Vec<IntVec> {
    let e = reduced_echelon(rows, ncols);
    let mut basis = Vec::new();
    for free in 0..ncols {
        if e.pivots.contains(&free) {
            continue;
        }
        let l = e.rows.iter().zip(&e.pivots).fold(BigInt::one(), |l, (r, &p)| l.lcm(&r[p]));
        let mut f = vec![BigInt::zero(); ncols];
        f[free] = l.clone();
        for (r, &p) in e.rows.iter().zip(&e.pivots) {
            f[p] = -(&r[free] * &l) / &r[p];
        }
        basis.push(primitive(&f));
    }
    basis
}

/// Some rational `c` with `Σ c_i vectors_i = target`, free variables set to
/// zero; `None` when `target` is outside the rational span.
pub fn solve_combination(vectors: &[IntVec], target: &[BigInt]) -> Option<RatVec> {
    let m = vectors.len();
    let dim = target.len();
    // Rows of the augmented transpose [V^T | target].
    let rows: Vec<IntVec> = (0..dim)
        .map(|i| {
            let mut r: IntVec = vectors.iter().map(|v| v[i].clone()).collect();
            r.push(target[i].clone());
            r
        })
        .collect();
    let e = reduced_echelon(&rows, m + 1);
    if e.pivots.contains(&m) {
        return None;
    }
    let mut c = vec![BigRational::zero(); m];
    for (r, &p) in e.rows.iter().zip(&e.pivots) {
        c[p] = BigRational::new(r[m].clone(), r[p].clone());
    }
    Some(c)
}

/// Row-style Hermite normal form of the integer lattice spanned by `rows`;
/// returns a basis with strictly increasing pivot columns, positive
/// pivots, and entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_basis(rows: &[IntVec], ncols: usize) -> Vec<IntVec> {
    let mut m: Vec<IntVec> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut top = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if top == m.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (top..m.len()).filter(|&i| !m[i][col].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by(|&&a, &&b| m[a][col].abs().cmp(&m[b][col].abs())).unwrap();
            m.swap(top, p);
            let prow = m[top].clone();
            for i in top + 1..m.len() {
                if m[i][col].is_zero() {
                    continue;
                }
                let q = m[i][col].div_floor(&prow[col]);
                for (x, y) in m[i].iter_mut().zip(&prow) {
                    *x = &*x - &q * y;
                }
            }
            if (top + 1..m.len()).all(|i| m[i][col].is_zero()) {
                if m[top][col].is_negative() {
                    for x in m[top].iter_mut() {
                        *x = -x.clone();
                    }
                }
                break;
            }
        }
        if m.get(top).map_or(true, |r| r[col].is_zero()) {
            continue;
        }
        pivots.push(col);
        top += 1;
    }
    m.truncate(top);
    for (k, &col) in pivots.iter().enumerate() {
        let prow = m[k].clone();
        for i in 0..k {
            let q = m[i][col].div_floor(&prow[col]);
            if q.is_zero() {
                continue;
            }
            for (x, y) in m[i].iter_mut().zip(&prow) {
                *x = &*x - &q * y;
            }
        }
    }
    m
}

/// Smallest positive `n` with `n * target` in the integer span of `vectors`,
/// or `None` when `target` is outside the rational span.
pub fn minimal_lattice_multiple(vectors: &[IntVec], target: &[BigInt]) -> Option<BigInt> {
    let basis = hermite_basis(vectors, target.len());
    // The basis is linearly independent, so coordinates are unique.
    let c = solve_combination(&basis, target)?;
    Some(c.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom())))
}

/// Exact rational matrix helpers on dense row-major matrices.
pub mod rat {
    use super::*;

    pub type RatMatrix = Vec<Vec<BigRational>>;

    pub fn from_i64(m: &[Vec<i64>]) -> RatMatrix {
        m.iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
            .collect()
    }

    pub fn identity(n: usize) -> RatMatrix {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect()
    }

    pub fn mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
        let n = a.len();
        let k = b.len();
        let m = if k == 0 { 0 } else { b[0].len() };
        (0..n)
            .map(|i| {
                (0..m)
                    .map(|j| (0..k).fold(BigRational::zero(), |acc, t| acc + &a[i][t] * &b[t][j]))
                    .collect()
            })
            .collect()
    }

    /// Integer matrix when every entry is integral.
    pub fn to_i64(m: &RatMatrix) -> Option<Vec<Vec<i64>>> {
        m.iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        if x.is_integer() {
                            i64::try_from(x.to_integer()).ok()
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rank_and_nullspace() {
        let rows = int_rows(&[vec![1, 1, 0], vec![0, 1, 1]]);
        assert_eq!(rank(&rows, 3), 2);
        assert_eq!(nullspace(&rows, 3), vec![ints(&[1, -1, 1])]);
        assert_eq!(nullspace(&[], 2), vec![ints(&[1, 0]), ints(&[0, 1])]);
    }

    #[test]
    fn combination() {
        let v = int_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        let c = solve_combination(&v, &ints(&[1, 1, 1])).unwrap();
        assert_eq!(c, vec![r(1, 2), r(1, 2), r(1, 2)]);
        let v = int_rows(&[vec![1, 1, 0], vec![0, 1, 1]]);
        assert!(solve_combination(&v, &ints(&[1, 1, 1])).is_none());
    }

    #[test]
    fn lattice_multiple() {
        let v = int_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(minimal_lattice_multiple(&v, &ints(&[1, 1, 1])), Some(BigInt::from(2)));
        let v = int_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(minimal_lattice_multiple(&v, &ints(&[1, 1])), Some(BigInt::from(6)));
        let v = int_rows(&[vec![2, 2], vec![3, 3]]);
        assert_eq!(minimal_lattice_multiple(&v, &ints(&[1, 1])), Some(BigInt::from(1)));
    }

    #[test]
    fn hermite_shape() {
        let h = hermite_basis(&int_rows(&[vec![4, 6], vec![6, 9], vec![2, 3]]), 2);
        assert_eq!(h, vec![ints(&[2, 3])]);
        let h = hermite_basis(&int_rows(&[vec![3, 1], vec![1, 1]]), 2);
        assert_eq!(h, vec![ints(&[1, 1]), ints(&[0, 2])]);
    }
}
