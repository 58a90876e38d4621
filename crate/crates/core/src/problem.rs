//! Problem instances for the travelling salesman (TSP) and quadratic
//! assignment (QAP) problems, their cost functions and a seeded generator.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense square matrix of non-negative costs, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<f64>>", try_from = "Vec<Vec<f64>>")]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Builds a matrix from rows, failing unless every row has `rows.len()` entries.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Validation(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Matrix { n, data })
    }

    /// Builds an `n x n` matrix where entry `(i, j)` is `f(i, j)`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Checks the cost-matrix contract: finite, non-negative, zero diagonal.
    fn validate(&self, name: &str) -> Result<()> {
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j);
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::Validation(format!(
                        "{name}[{i}][{j}] = {v} is not a finite non-negative value"
                    )));
                }
            }
            if self.get(i, i) != 0.0 {
                return Err(Error::Validation(format!(
                    "{name}[{i}][{i}] = {} but the diagonal must be zero",
                    self.get(i, i)
                )));
            }
        }
        Ok(())
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.rows().map(<[f64]>::to_vec).collect()
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(rows)
    }
}

/// A TSP instance given by its distance matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TspRaw")]
pub struct TspInstance {
    d: Matrix,
}

#[derive(Deserialize)]
struct TspRaw {
    d: Matrix,
}

impl TryFrom<TspRaw> for TspInstance {
    type Error = Error;
    fn try_from(raw: TspRaw) -> Result<Self> {
        TspInstance::new(raw.d)
    }
}

impl TspInstance {
    pub fn new(d: Matrix) -> Result<Self> {
        if d.n() == 0 {
            return Err(Error::Validation(
                "TSP instance needs at least one city".into(),
            ));
        }
        d.validate("d")?;
        Ok(TspInstance { d })
    }

    pub fn n(&self) -> usize {
        self.d.n()
    }

    pub fn distances(&self) -> &Matrix {
        &self.d
    }

    pub fn is_symmetric(&self) -> bool {
        self.d.is_symmetric()
    }
}

/// A QAP instance: flow matrix `b` between facilities and distance matrix `c`
/// between locations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QapRaw")]
pub struct QapInstance {
    b: Matrix,
    c: Matrix,
}

#[derive(Deserialize)]
struct QapRaw {
    b: Matrix,
    c: Matrix,
}

impl TryFrom<QapRaw> for QapInstance {
    type Error = Error;
    fn try_from(raw: QapRaw) -> Result<Self> {
        QapInstance::new(raw.b, raw.c)
    }
}

impl QapInstance {
    pub fn new(flow: Matrix, distance: Matrix) -> Result<Self> {
        if flow.n() != distance.n() {
            return Err(Error::Validation(format!(
                "flow matrix is {0}x{0} but distance matrix is {1}x{1}",
                flow.n(),
                distance.n()
            )));
        }
        if flow.n() == 0 {
            return Err(Error::Validation(
                "QAP instance needs at least one facility".into(),
            ));
        }
        flow.validate("b")?;
        distance.validate("c")?;
        Ok(QapInstance {
            b: flow,
            c: distance,
        })
    }

    pub fn n(&self) -> usize {
        self.b.n()
    }

    pub fn flow(&self) -> &Matrix {
        &self.b
    }

    pub fn distance(&self) -> &Matrix {
        &self.c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Tsp,
    Qap,
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemKind::Tsp => "tsp",
            ProblemKind::Qap => "qap",
        })
    }
}

impl std::str::FromStr for ProblemKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tsp" => Ok(ProblemKind::Tsp),
            "qap" => Ok(ProblemKind::Qap),
            other => Err(Error::invalid(format!("unknown problem kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProblemInstance {
    Tsp(TspInstance),
    Qap(QapInstance),
}

impl ProblemInstance {
    pub fn n(&self) -> usize {
        match self {
            ProblemInstance::Tsp(t) => t.n(),
            ProblemInstance::Qap(q) => q.n(),
        }
    }

    pub fn kind(&self) -> ProblemKind {
        match self {
            ProblemInstance::Tsp(_) => ProblemKind::Tsp,
            ProblemInstance::Qap(_) => ProblemKind::Qap,
        }
    }

    /// Objective value of `pi`: closed-tour length for TSP, flow-weighted
    /// distance for QAP.
    pub fn cost(&self, pi: &Permutation) -> Result<f64> {
        match self {
            ProblemInstance::Tsp(t) => tour_cost(t, pi),
            ProblemInstance::Qap(q) => qap_cost(q, pi),
        }
    }
}

impl From<TspInstance> for ProblemInstance {
    fn from(t: TspInstance) -> Self {
        ProblemInstance::Tsp(t)
    }
}

impl From<QapInstance> for ProblemInstance {
    fn from(q: QapInstance) -> Self {
        ProblemInstance::Qap(q)
    }
}

/// A bijection on `0..n`.
///
/// For TSP, `pi[p]` is the city visited at tour position `p`. For QAP,
/// `pi[k]` is the location assigned to facility `k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            if v >= n || seen[v] {
                return Err(Error::invalid(format!(
                    "{values:?} is not a permutation of 0..{n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation(values))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// Cyclic left rotation by `k` places.
    pub fn rotated(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        Permutation(v)
    }

    /// Uniformly random permutation (Fisher-Yates).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.gen_range(0..=i);
            v.swap(i, j);
        }
        Permutation(v)
    }

    /// Swaps two entries in place. The result is still a permutation.
    pub fn swap(&mut self, i: usize, j: usize) {
        self.0.swap(i, j);
    }
}

impl std::ops::Index<usize> for Permutation {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Length of the closed tour visiting cities in the order given by `pi`.
pub fn tour_cost(inst: &TspInstance, pi: &Permutation) -> Result<f64> {
    let n = inst.n();
    if pi.len() != n {
        return Err(Error::invalid(format!(
            "permutation has length {} but the instance has {n} cities",
            pi.len()
        )));
    }
    if n < 2 {
        return Err(Error::invalid("a tour needs at least two cities"));
    }
    let d = inst.distances();
    Ok((0..n).map(|k| d.get(pi[k], pi[(k + 1) % n])).sum())
}

/// `sum_k sum_l b[k][l] * c[pi(k)][pi(l)]`.
pub fn qap_cost(inst: &QapInstance, pi: &Permutation) -> Result<f64> {
    let n = inst.n();
    if pi.len() != n {
        return Err(Error::invalid(format!(
            "permutation has length {} but the instance has {n} facilities",
            pi.len()
        )));
    }
    let (b, c) = (inst.flow(), inst.distance());
    let mut total = 0.0;
    for k in 0..n {
        for l in 0..n {
            total += b.get(k, l) * c.get(pi[k], pi[l]);
        }
    }
    Ok(total)
}

fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    let mut m = Matrix::zeros(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rng.gen_range(1..=10) as f64;
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    m
}

/// Seeded random instance with symmetric integer costs in `[1, 10]` and a
/// zero diagonal.
pub fn random_instance(kind: ProblemKind, n: usize, seed: u64) -> Result<ProblemInstance> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "instance size must be at least 2, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match kind {
        ProblemKind::Tsp => TspInstance::new(random_symmetric(n, &mut rng))?.into(),
        ProblemKind::Qap => {
            let b = random_symmetric(n, &mut rng);
            let c = random_symmetric(n, &mut rng);
            QapInstance::new(b, c)?.into()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize) -> Matrix {
        Matrix::from_fn(n, |i, j| if i == j { 0.0 } else { 1.0 })
    }

    #[test]
    fn uniform_tour_costs_n() {
        let t = TspInstance::new(uniform(3)).unwrap();
        for p in [vec![0, 1, 2], vec![2, 0, 1], vec![1, 0, 2]] {
            assert_eq!(tour_cost(&t, &Permutation::new(p).unwrap()).unwrap(), 3.0);
        }
    }

    #[test]
    fn two_city_tour_traverses_edge_twice() {
        let d = Matrix::from_rows(vec![vec![0.0, 5.0], vec![5.0, 0.0]]).unwrap();
        let t = TspInstance::new(d).unwrap();
        assert_eq!(tour_cost(&t, &Permutation::identity(2)).unwrap(), 10.0);
    }

    #[test]
    fn qap_small_cases() {
        let zero = QapInstance::new(Matrix::zeros(3), uniform(3)).unwrap();
        assert_eq!(
            qap_cost(&zero, &Permutation::new(vec![2, 0, 1]).unwrap()).unwrap(),
            0.0
        );

        let b = Matrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let c = Matrix::from_rows(vec![vec![0.0, 3.0], vec![3.0, 0.0]]).unwrap();
        let q = QapInstance::new(b, c).unwrap();
        assert_eq!(qap_cost(&q, &Permutation::identity(2)).unwrap(), 6.0);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let t = TspInstance::new(uniform(3)).unwrap();
        assert!(matches!(
            tour_cost(&t, &Permutation::identity(4)),
            Err(Error::InvalidArgument(_))
        ));
        let q = QapInstance::new(uniform(3), uniform(3)).unwrap();
        assert!(matches!(
            qap_cost(&q, &Permutation::identity(2)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3, 1]).is_err());
        assert!(Permutation::new(vec![2, 0, 1]).is_ok());
    }

    #[test]
    fn instance_validation() {
        let neg = Matrix::from_rows(vec![vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(TspInstance::new(neg), Err(Error::Validation(_))));
        let diag = Matrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(TspInstance::new(diag), Err(Error::Validation(_))));
        assert!(QapInstance::new(uniform(2), uniform(3)).is_err());
    }

    #[test]
    fn generator_contract() {
        let a = random_instance(ProblemKind::Tsp, 3, 42).unwrap();
        let b = random_instance(ProblemKind::Tsp, 3, 42).unwrap();
        assert_eq!(a, b);

        let ProblemInstance::Qap(q) = random_instance(ProblemKind::Qap, 4, 7).unwrap() else {
            panic!("expected QAP");
        };
        assert!(q.flow().is_symmetric() && q.distance().is_symmetric());
        for i in 0..4 {
            assert_eq!(q.flow().get(i, i), 0.0);
            assert_eq!(q.distance().get(i, i), 0.0);
        }

        let ProblemInstance::Tsp(t) = random_instance(ProblemKind::Tsp, 5, 1).unwrap() else {
            panic!("expected TSP");
        };
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    let v = t.distances().get(i, j);
                    assert!((1.0..=10.0).contains(&v) && v.fract() == 0.0);
                }
            }
        }
        assert!(matches!(
            random_instance(ProblemKind::Tsp, 1, 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn instance_json_round_trip() {
        let inst = random_instance(ProblemKind::Qap, 3, 5).unwrap();
        let json = serde_json::to_string(&inst).unwrap();
        let back: ProblemInstance = serde_json::from_str(&json).unwrap();
        assert_eq!(inst, back);
    }
}
