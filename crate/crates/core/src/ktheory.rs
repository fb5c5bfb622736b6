//! Integer Smith normal form and the K-groups of finite row-finite graphs
//! without sinks: `K0 = coker(Aᵗ − I)`, `K1 = ker(Aᵗ − I)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexRef};

/// Dense integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &a[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q · row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * q;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += q · col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * q;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// `u · m · v = d` with `u`, `v` unimodular and `d` diagonal, each diagonal entry
/// dividing the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

/// Smith normal form with transformation matrices. The identities
/// `u·m·v = d`, `|det u| = |det v| = 1` and the divisibility chain are asserted
/// before returning.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);

    for t in 0..r.min(c) {
        // the smallest non-zero entry of the remaining block is the pivot
        while let Some((pi, pj)) = smallest(&d, t) {
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            for j in t + 1..c {
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                if !q.is_zero() {
                    d.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                }
            }
            for i in t + 1..r {
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                if !q.is_zero() {
                    d.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                }
            }
            let clear =
                (t + 1..c).all(|j| d[(t, j)].is_zero()) && (t + 1..r).all(|i| d[(i, t)].is_zero());
            if !clear {
                continue;
            }
            // the pivot must divide the rest of the block
            let bad = (t + 1..r)
                .flat_map(|i| (t + 1..c).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].is_multiple_of(&d[(t, t)]));
            match bad {
                Some((i, _)) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    let form = SmithForm { u, d, v };
    verify(m, &form);
    form
}

fn smallest(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            if d[(i, j)].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn verify(m: &IntMatrix, f: &SmithForm) {
    assert_eq!(f.u.mul(m).mul(&f.v), f.d, "U·m·V differs from D");
    assert!(f.u.determinant().abs().is_one(), "U is not unimodular");
    assert!(f.v.determinant().abs().is_one(), "V is not unimodular");
    for i in 0..f.d.rows {
        for j in 0..f.d.cols {
            assert!(i == j || f.d[(i, j)].is_zero(), "D is not diagonal");
        }
    }
    let diag = f.diagonal();
    for w in diag.windows(2) {
        assert!(!w[0].is_negative(), "negative invariant factor");
        let ok = if w[0].is_zero() {
            w[1].is_zero()
        } else {
            w[1].is_multiple_of(&w[0])
        };
        assert!(ok, "divisibility chain broken");
    }
}

/// K-groups: `K0 ≅ ℤ^free ⊕ ⊕ ℤ/d`, `K1 ≅ ℤ^k1`. Equality compares the groups
/// only, not the diagonal kept in `factors`.
#[derive(Debug, Clone, Eq, Serialize)]
pub struct KInvariants {
    #[serde(serialize_with = "as_strings")]
    pub k0_torsion: Vec<BigInt>,
    pub k0_free_rank: usize,
    pub k1_rank: usize,
    /// The full diagonal of the Smith form, for reports.
    #[serde(serialize_with = "as_strings")]
    pub factors: Vec<BigInt>,
}

fn as_strings<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

impl PartialEq for KInvariants {
    fn eq(&self, other: &Self) -> bool {
        (&self.k0_torsion, self.k0_free_rank, self.k1_rank)
            == (&other.k0_torsion, other.k0_free_rank, other.k1_rank)
    }
}

impl KInvariants {
    /// `Z^r (+) Z/d1 (+) …`, or `0` for the trivial group.
    pub fn k0_string(&self) -> String {
        let mut parts = Vec::new();
        if self.k0_free_rank > 0 {
            parts.push(format!("Z^{}", self.k0_free_rank));
        }
        parts.extend(self.k0_torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" (+) ")
        }
    }

    pub fn k1_string(&self) -> String {
        if self.k1_rank == 0 {
            "0".into()
        } else {
            format!("Z^{}", self.k1_rank)
        }
    }
}

impl fmt::Display for KInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "K0: {}\nK1: {}\nfactors: [",
            self.k0_string(),
            self.k1_string()
        )?;
        for (i, d) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("]")
    }
}

/// `Aᵗ − I` for a finite row-finite graph, vertices in id order.
pub fn adjacency_minus_identity_t(g: &Graph) -> Result<IntMatrix> {
    if g.has_rays() {
        return Err(Error::HasRays);
    }
    if !g.is_row_finite() {
        return Err(Error::NotRowFinite);
    }
    let ids: Vec<&String> = g.vertices().iter().collect();
    let n = ids.len();
    let mut m = IntMatrix::identity(n);
    for i in 0..n {
        m[(i, i)] = -BigInt::one();
    }
    for (i, s) in ids.iter().enumerate() {
        for (j, d) in ids.iter().enumerate() {
            let a = g
                .edge_multiplicity(
                    &VertexRef::core((*s).clone()),
                    &VertexRef::core((*d).clone()),
                )
                .finite()
                .expect("row-finite");
            m[(j, i)] += BigInt::from(a);
        }
    }
    Ok(m)
}

pub fn k_theory(g: &Graph) -> Result<KInvariants> {
    let m = adjacency_minus_identity_t(g)?;
    if g.vertices()
        .iter()
        .any(|v| g.is_sink(&VertexRef::core(v.clone())))
    {
        return Err(Error::HasSinks);
    }
    let factors = smith_normal_form(&m).diagonal();
    let zeros = factors.iter().filter(|d| d.is_zero()).count();
    Ok(KInvariants {
        k0_torsion: factors
            .iter()
            .filter(|d| **d > BigInt::one())
            .cloned()
            .collect(),
        k0_free_rank: zeros,
        k1_rank: zeros,
        factors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // used to blow up to million-bit entries
    #[test]
    fn dense_six_by_six() {
        let m = IntMatrix::from_rows(&[
            vec![4, 1, -5, 7, -4, -7],
            vec![-2, 5, 8, 1, 3, -5],
            vec![8, -9, 4, 8, 2, 2],
            vec![-5, 9, 2, 4, -1, -6],
            vec![-3, -3, -3, 9, -7, 9],
            vec![1, 7, 4, -5, 2, 2],
        ]);
        let d = smith_normal_form(&m).diagonal();
        assert_eq!(d.last().unwrap().abs(), m.determinant().abs());
    }
    use crate::fixtures;

    fn diag(rows: &[Vec<i64>]) -> Vec<BigInt> {
        smith_normal_form(&IntMatrix::from_rows(rows)).diagonal()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_examples() {
        assert_eq!(diag(&[vec![0]]), big(&[0]));
        assert_eq!(diag(&[vec![2]]), big(&[2]));
        assert_eq!(diag(&[vec![2, 4], vec![6, 8]]), big(&[2, 4]));
        assert_eq!(diag(&[vec![-1, 1], vec![1, -1]]), big(&[1, 0]));
        assert_eq!(diag(&[vec![2, 0], vec![0, 3]]), big(&[1, 6]));
        assert_eq!(diag(&[vec![1, 2, 3], vec![4, 5, 6]]), big(&[1, 3]));
        assert_eq!(
            smith_normal_form(&IntMatrix::zeros(0, 0)).diagonal(),
            big(&[])
        );
    }

    #[test]
    fn determinant() {
        assert_eq!(
            IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]).determinant(),
            BigInt::from(-8)
        );
        assert_eq!(
            IntMatrix::from_rows(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]).determinant(),
            BigInt::from(-2)
        );
    }

    #[test]
    fn k_groups() {
        let lp = k_theory(&fixtures::loop_graph()).unwrap();
        assert_eq!((lp.k0_free_rank, lp.k1_rank), (1, 1));
        assert!(lp.k0_torsion.is_empty());
        assert_eq!(lp.k0_string(), "Z^1");

        for n in 2..6u64 {
            let g = Graph::builder()
                .vertex("u")
                .edge("u", "u", n)
                .build()
                .unwrap();
            let k = k_theory(&g).unwrap();
            assert_eq!(
                k.k0_torsion,
                big(&[n as i64 - 1])
                    .into_iter()
                    .filter(|d| *d > BigInt::one())
                    .collect::<Vec<_>>()
            );
            assert_eq!((k.k0_free_rank, k.k1_rank), (0, 0));
        }

        let e = k_theory(&fixtures::esse()).unwrap();
        assert_eq!(e.factors, big(&[1, 0]));
        assert_eq!((e.k0_free_rank, e.k1_rank), (1, 1));

        assert!(matches!(k_theory(&fixtures::b2()), Err(Error::HasSinks)));
        assert!(matches!(
            k_theory(&fixtures::inf()),
            Err(Error::NotRowFinite)
        ));
        assert!(matches!(k_theory(&fixtures::vi_e()), Err(Error::HasRays)));
    }

    #[test]
    fn report_format() {
        let g = Graph::builder()
            .vertex("u")
            .edge("u", "u", 3)
            .build()
            .unwrap();
        assert_eq!(
            k_theory(&g).unwrap().to_string(),
            "K0: Z/2\nK1: 0\nfactors: [2]"
        );
    }
}
