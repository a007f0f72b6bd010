//! Points, simplices, polyhedral chains and the algebraic operators on them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 8;

/// Largest supported simplex degree.
pub const MAX_DEGREE: usize = 3;

/// A simplex counts as degenerate when `vol_k <= DEGENERACY_TOL * diam^k`.
pub const DEGENERACY_TOL: f64 = 1e-14;

/// A point of ℝᵈ with `1 <= d <= MAX_DIM`, stored inline.
#[derive(Clone, Copy, Debug)]
pub struct Point {
    c: [f64; MAX_DIM],
    d: u8,
}

impl Point {
    pub fn new(coords: &[f64]) -> Result<Point> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(Error::Dimension(format!(
                "point dimension {} outside 1..={MAX_DIM}",
                coords.len()
            )));
        }
        if let Some(x) = coords.iter().find(|x| !x.is_finite()) {
            return Err(Error::Parameter(format!("non-finite coordinate {x}")));
        }
        Ok(Point::from_slice_unchecked(coords))
    }

    pub(crate) fn from_slice_unchecked(coords: &[f64]) -> Point {
        let mut c = [0.0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Point {
            c,
            d: coords.len() as u8,
        }
    }

    pub fn origin(dim: usize) -> Point {
        Point {
            c: [0.0; MAX_DIM],
            d: dim.clamp(1, MAX_DIM) as u8,
        }
    }

    /// Convenience constructor for the real line.
    pub fn scalar(x: f64) -> Point {
        Point::from_slice_unchecked(&[x])
    }

    pub fn dim(&self) -> usize {
        self.d as usize
    }

    pub fn coords(&self) -> &[f64] {
        &self.c[..self.d as usize]
    }

    pub fn get(&self, i: usize) -> f64 {
        self.coords()[i]
    }

    pub fn add(&self, o: &Point) -> Point {
        let mut r = *self;
        for i in 0..self.dim() {
            r.c[i] += o.c[i];
        }
        r
    }

    pub fn sub(&self, o: &Point) -> Point {
        let mut r = *self;
        for i in 0..self.dim() {
            r.c[i] -= o.c[i];
        }
        r
    }

    pub fn scale(&self, s: f64) -> Point {
        let mut r = *self;
        for i in 0..self.dim() {
            r.c[i] *= s;
        }
        r
    }

    pub fn dot(&self, o: &Point) -> f64 {
        self.coords()
            .iter()
            .zip(o.coords())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(&self, o: &Point) -> f64 {
        self.sub(o).norm()
    }

    /// `(a + b) / 2`, symmetric in its arguments bit for bit.
    pub fn midpoint(a: &Point, b: &Point) -> Point {
        let mut r = *a;
        for i in 0..a.dim() {
            r.c[i] = (a.c[i] + b.c[i]) * 0.5;
        }
        r
    }

    /// `(1 - t) a + t b`; equals [`Point::midpoint`] exactly at `t = 1/2`.
    pub fn lerp(a: &Point, b: &Point, t: f64) -> Point {
        let mut r = *a;
        for i in 0..a.dim() {
            r.c[i] = (1.0 - t) * a.c[i] + t * b.c[i];
        }
        r
    }

    /// Bit pattern key with `-0.0` folded onto `0.0`.
    pub(crate) fn key(&self) -> impl Iterator<Item = u64> + '_ {
        self.coords().iter().map(|x| (x + 0.0).to_bits())
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Point) -> bool {
        self.d == other.d && self.coords() == other.coords()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.coords().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// An ordered tuple `[p0 p1 ... pk]` of `k + 1` points, `k <= 3`.
#[derive(Clone, Copy, Debug)]
pub struct Simplex {
    v: [Point; MAX_DEGREE + 1],
    n: u8,
}

impl Simplex {
    pub fn new(vertices: &[Point]) -> Result<Simplex> {
        if vertices.is_empty() || vertices.len() > MAX_DEGREE + 1 {
            return Err(Error::Degree(format!(
                "a simplex needs 1..={} vertices, got {}",
                MAX_DEGREE + 1,
                vertices.len()
            )));
        }
        let d = vertices[0].dim();
        if vertices.iter().any(|p| p.dim() != d) {
            return Err(Error::Dimension(
                "simplex vertices have different dimensions".into(),
            ));
        }
        Ok(Simplex::from_points_unchecked(vertices))
    }

    pub(crate) fn from_points_unchecked(vertices: &[Point]) -> Simplex {
        let mut v = [Point::origin(vertices[0].dim()); MAX_DEGREE + 1];
        v[..vertices.len()].copy_from_slice(vertices);
        Simplex {
            v,
            n: vertices.len() as u8,
        }
    }

    /// Builds a simplex from coordinate rows.
    pub fn from_coords(rows: &[&[f64]]) -> Result<Simplex> {
        let pts = rows
            .iter()
            .map(|r| Point::new(r))
            .collect::<Result<Vec<_>>>()?;
        Simplex::new(&pts)
    }

    pub fn degree(&self) -> usize {
        self.n as usize - 1
    }

    pub fn dim(&self) -> usize {
        self.v[0].dim()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.v[..self.n as usize]
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices()[i]
    }

    /// The face obtained by deleting vertex `i`.
    pub fn face(&self, i: usize) -> Simplex {
        debug_assert!(self.degree() >= 1 && i <= self.degree());
        let mut v = [Point::origin(self.dim()); MAX_DEGREE + 1];
        let mut m = 0;
        for (j, p) in self.vertices().iter().enumerate() {
            if j != i {
                v[m] = *p;
                m += 1;
            }
        }
        Simplex { v, n: self.n - 1 }
    }

    /// Vertices in reverse order.
    pub fn reversed(&self) -> Simplex {
        let mut s = *self;
        s.v[..self.n as usize].reverse();
        s
    }

    pub fn map_vertices(&self, f: impl Fn(&Point) -> Point) -> Simplex {
        let mut s = *self;
        for p in s.v[..self.n as usize].iter_mut() {
            *p = f(p);
        }
        s
    }

    /// Homothety of ratio `lambda` centred at `center`.
    pub fn scaled_about(&self, center: &Point, lambda: f64) -> Simplex {
        self.map_vertices(|p| center.add(&p.sub(center).scale(lambda)))
    }

    /// Homothety of ratio `lambda` centred at the base point `p0`.
    pub fn shrunk(&self, lambda: f64) -> Simplex {
        let c = self.v[0];
        self.scaled_about(&c, lambda)
    }

    pub(crate) fn key(&self) -> Vec<u64> {
        self.vertices().iter().flat_map(|p| p.key()).collect()
    }
}

impl PartialEq for Simplex {
    fn eq(&self, other: &Simplex) -> bool {
        self.vertices() == other.vertices()
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.vertices().iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Parses `"x1,y1;x2,y2;x3,y3"`.
impl FromStr for Simplex {
    type Err = Error;

    fn from_str(text: &str) -> Result<Simplex> {
        let mut pts = Vec::new();
        for (vi, vtext) in text.split(';').enumerate() {
            let coords = vtext
                .split(',')
                .map(|c| {
                    c.trim().parse::<f64>().map_err(|_| {
                        Error::Parameter(format!(
                            "vertex {vi}: cannot parse coordinate `{}`",
                            c.trim()
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            pts.push(Point::new(&coords)?);
        }
        Simplex::new(&pts)
    }
}

/// Finite real-weighted formal sum of simplices of a common degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    degree: usize,
    terms: Vec<(f64, Simplex)>,
}

impl Chain {
    pub fn new(degree: usize) -> Chain {
        Chain {
            degree,
            terms: Vec::new(),
        }
    }

    pub fn from_simplex(s: Simplex) -> Chain {
        Chain {
            degree: s.degree(),
            terms: vec![(1.0, s)],
        }
    }

    pub fn from_terms(degree: usize, terms: Vec<(f64, Simplex)>) -> Result<Chain> {
        let mut c = Chain::new(degree);
        for (w, s) in terms {
            c.push(w, s)?;
        }
        Ok(c)
    }

    pub(crate) fn from_terms_unchecked(degree: usize, terms: Vec<(f64, Simplex)>) -> Chain {
        Chain { degree, terms }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[(f64, Simplex)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Ambient dimension, if the chain has any term.
    pub fn dim(&self) -> Option<usize> {
        self.terms.first().map(|(_, s)| s.dim())
    }

    pub fn push(&mut self, weight: f64, s: Simplex) -> Result<()> {
        if s.degree() != self.degree {
            return Err(Error::Degree(format!(
                "cannot add a {}-simplex to a {}-chain",
                s.degree(),
                self.degree
            )));
        }
        if let Some(d) = self.dim() {
            if d != s.dim() {
                return Err(Error::Dimension(format!(
                    "cannot add a simplex of dimension {} to a chain in dimension {d}",
                    s.dim()
                )));
            }
        }
        self.terms.push((weight, s));
        Ok(())
    }

    pub fn scaled(&self, c: f64) -> Chain {
        Chain {
            degree: self.degree,
            terms: self.terms.iter().map(|(w, s)| (c * w, *s)).collect(),
        }
    }

    pub fn plus(&self, other: &Chain) -> Result<Chain> {
        let mut r = self.clone();
        for (w, s) in &other.terms {
            r.push(*w, *s)?;
        }
        Ok(r)
    }

    pub fn minus(&self, other: &Chain) -> Result<Chain> {
        self.plus(&other.scaled(-1.0))
    }

    /// Merges terms with identical vertex tuples, drops zero weights and
    /// sorts the result, so equal chains get equal representations.
    pub fn normalize(&self) -> Chain {
        let mut keyed: Vec<(Vec<u64>, f64, Simplex)> =
            self.terms.iter().map(|(w, s)| (s.key(), *w, *s)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Vec<u64>, f64, Simplex)> = Vec::with_capacity(keyed.len());
        for (k, w, s) in keyed {
            match out.last_mut() {
                Some(last) if last.0 == k => last.1 += w,
                _ => out.push((k, w, s)),
            }
        }
        Chain {
            degree: self.degree,
            terms: out
                .into_iter()
                .filter(|t| t.1 != 0.0)
                .map(|(_, w, s)| (w, s))
                .collect(),
        }
    }

    /// ∂ extended linearly over the terms.
    pub fn boundary(&self) -> Result<Chain> {
        if self.degree == 0 {
            return Err(Error::Degree(
                "the boundary of a 0-chain is not modelled".into(),
            ));
        }
        let mut terms = Vec::with_capacity(self.terms.len() * (self.degree + 1));
        for (w, s) in &self.terms {
            for i in 0..=self.degree {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                terms.push((sign * w, s.face(i)));
            }
        }
        Ok(Chain {
            degree: self.degree - 1,
            terms,
        })
    }

    pub fn push_forward<M: PointMap + ?Sized>(&self, m: &M) -> Result<Chain> {
        if let Some(d) = self.dim() {
            if d != m.source_dim() {
                return Err(Error::Dimension(format!(
                    "map expects dimension {}, chain lives in dimension {d}",
                    m.source_dim()
                )));
            }
        }
        Ok(Chain {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(w, s)| (*w, s.map_vertices(|p| m.map_point(p))))
                .collect(),
        })
    }
}

/// ∂ of a chain.
pub fn boundary(c: &Chain) -> Result<Chain> {
    c.boundary()
}

/// Vertex-wise image of a chain under a point map.
pub fn push_forward<M: PointMap + ?Sized>(m: &M, c: &Chain) -> Result<Chain> {
    c.push_forward(m)
}

/// A map between Euclidean spaces acting on points.
pub trait PointMap: Send + Sync {
    fn source_dim(&self) -> usize;
    fn target_dim(&self) -> usize;
    /// Image of a point of dimension `source_dim()`.
    fn map_point(&self, p: &Point) -> Point;
}

/// `x ↦ A x + q` with `A` of shape `rows × cols`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    a: Vec<f64>,
    rows: usize,
    cols: usize,
    q: Vec<f64>,
}

impl AffineMap {
    /// `a` is row-major of length `q.len() * cols`.
    pub fn new(a: Vec<f64>, cols: usize, q: Vec<f64>) -> Result<AffineMap> {
        let rows = q.len();
        if rows == 0 || rows > MAX_DIM || cols == 0 || cols > MAX_DIM || a.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "affine map with {} entries cannot be {rows}x{cols}",
                a.len()
            )));
        }
        if a.iter().chain(&q).any(|x| !x.is_finite()) {
            return Err(Error::Parameter("affine map has non-finite entries".into()));
        }
        Ok(AffineMap { a, rows, cols, q })
    }

    pub fn identity(dim: usize) -> AffineMap {
        AffineMap::scaling(dim, 1.0)
    }

    pub fn scaling(dim: usize, lambda: f64) -> AffineMap {
        let mut a = vec![0.0; dim * dim];
        for i in 0..dim {
            a[i * dim + i] = lambda;
        }
        AffineMap {
            a,
            rows: dim,
            cols: dim,
            q: vec![0.0; dim],
        }
    }

    pub fn matrix(&self) -> &[f64] {
        &self.a
    }

    pub fn offset(&self) -> &[f64] {
        &self.q
    }
}

impl PointMap for AffineMap {
    fn source_dim(&self) -> usize {
        self.cols
    }

    fn target_dim(&self) -> usize {
        self.rows
    }

    fn map_point(&self, p: &Point) -> Point {
        let mut out = [0.0; MAX_DIM];
        for (i, o) in out.iter_mut().enumerate().take(self.rows) {
            let row = &self.a[i * self.cols..(i + 1) * self.cols];
            *o = self.q[i] + row.iter().zip(p.coords()).map(|(a, x)| a * x).sum::<f64>();
        }
        Point::from_slice_unchecked(&out[..self.rows])
    }
}

type PointFn = dyn Fn(&Point) -> Point + Send + Sync;

/// A general point map given by a closure.
#[derive(Clone)]
pub struct FnMap {
    src: usize,
    tgt: usize,
    f: Arc<PointFn>,
}

impl FnMap {
    pub fn new(
        source_dim: usize,
        target_dim: usize,
        f: impl Fn(&Point) -> Point + Send + Sync + 'static,
    ) -> FnMap {
        FnMap {
            src: source_dim,
            tgt: target_dim,
            f: Arc::new(f),
        }
    }
}

impl fmt::Debug for FnMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FnMap(ℝ^{} → ℝ^{})", self.src, self.tgt)
    }
}

impl PointMap for FnMap {
    fn source_dim(&self) -> usize {
        self.src
    }

    fn target_dim(&self) -> usize {
        self.tgt
    }

    fn map_point(&self, p: &Point) -> Point {
        (self.f)(p)
    }
}

/// Sign of a permutation given in one-line notation.
pub fn permutation_sign(sigma: &[usize]) -> i8 {
    let mut inversions = 0;
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            if sigma[i] > sigma[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    if sigma.len() != n {
        return Err(Error::Permutation(format!(
            "permutation of size {} applied to a simplex with {n} vertices",
            sigma.len()
        )));
    }
    let mut seen = [false; MAX_DEGREE + 1];
    for &s in sigma {
        if s >= n || seen[s] {
            return Err(Error::Permutation(format!(
                "{sigma:?} is not a permutation"
            )));
        }
        seen[s] = true;
    }
    Ok(())
}

/// `σS = [p_{σ⁻¹(0)} … p_{σ⁻¹(k)}]`: vertex `p_j` moves to slot `σ(j)`.
pub fn permute(sigma: &[usize], s: &Simplex) -> Result<(Simplex, i8)> {
    check_permutation(sigma, s.degree() + 1)?;
    let mut v = s.v;
    for (j, &t) in sigma.iter().enumerate() {
        v[t] = s.v[j];
    }
    Ok((Simplex { v, n: s.n }, permutation_sign(sigma)))
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Largest distance between two vertices.
pub fn diam(s: &Simplex) -> f64 {
    let v = s.vertices();
    let mut m: f64 = 0.0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            m = m.max(v[i].dist(&v[j]));
        }
    }
    m
}

fn factorial(h: usize) -> f64 {
    (1..=h).map(|i| i as f64).product()
}

fn determinant(m: &mut [f64], n: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| {
                m[a * n + col]
                    .abs()
                    .partial_cmp(&m[b * n + col].abs())
                    .unwrap_or(Ordering::Equal)
            })
            .unwrap_or(col);
        if m[pivot * n + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..n {
                m.swap(pivot * n + j, col * n + j);
            }
            det = -det;
        }
        let p = m[col * n + col];
        det *= p;
        for r in col + 1..n {
            let f = m[r * n + col] / p;
            for j in col..n {
                m[r * n + j] -= f * m[col * n + j];
            }
        }
    }
    det
}

fn gram_volume(pts: &[Point]) -> f64 {
    let h = pts.len() - 1;
    if h == 0 {
        return 1.0;
    }
    let rows: Vec<Point> = pts[1..].iter().map(|p| p.sub(&pts[0])).collect();
    let mut g = vec![0.0; h * h];
    for i in 0..h {
        for j in 0..h {
            g[i * h + j] = rows[i].dot(&rows[j]);
        }
    }
    determinant(&mut g, h).max(0.0).sqrt() / factorial(h)
}

/// `vol_h(S)`: the largest h-volume over all (h+1)-subtuples of vertices.
pub fn volk(s: &Simplex, h: usize) -> f64 {
    let v = s.vertices();
    if h > s.degree() {
        return 0.0;
    }
    let mut best: f64 = 0.0;
    let n = v.len();
    let mut idx: Vec<usize> = (0..=h).collect();
    loop {
        let pts: Vec<Point> = idx.iter().map(|&i| v[i]).collect();
        best = best.max(gram_volume(&pts));
        let mut i = h as isize;
        while i >= 0 && idx[i as usize] == n - 1 - (h - i as usize) {
            i -= 1;
        }
        if i < 0 {
            break;
        }
        idx[i as usize] += 1;
        for j in i as usize + 1..=h {
            idx[j] = idx[j - 1] + 1;
        }
    }
    best
}

pub fn vol2(s: &Simplex) -> f64 {
    volk(s, 2)
}

pub fn is_degenerate(s: &Simplex) -> bool {
    let k = s.degree();
    if k == 0 {
        return false;
    }
    volk(s, k) <= DEGENERACY_TOL * diam(s).powi(k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(rows: &[&[f64]]) -> Simplex {
        Simplex::from_coords(rows).unwrap()
    }

    #[test]
    fn boundary_of_triangle() {
        let t = s(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let b = Chain::from_simplex(t).boundary().unwrap();
        assert_eq!(b.terms()[0], (1.0, s(&[&[1.0, 0.0], &[0.0, 1.0]])));
        assert_eq!(b.terms()[1], (-1.0, s(&[&[0.0, 0.0], &[0.0, 1.0]])));
        assert_eq!(b.terms()[2], (1.0, s(&[&[0.0, 0.0], &[1.0, 0.0]])));
        assert!(b.boundary().unwrap().normalize().is_empty());
    }

    #[test]
    fn boundary_of_segment_and_point() {
        let e = s(&[&[0.5], &[2.0]]);
        let b = Chain::from_simplex(e).boundary().unwrap();
        assert_eq!(b.terms(), &[(1.0, s(&[&[2.0]])), (-1.0, s(&[&[0.5]]))]);
        assert!(matches!(b.boundary(), Err(Error::Degree(_))));
    }

    #[test]
    fn push_forward_scaling() {
        let c = Chain::from_simplex(s(&[&[0.0], &[2.0]]));
        let half = c.push_forward(&AffineMap::scaling(1, 0.5)).unwrap();
        assert_eq!(half.terms()[0].1, s(&[&[0.0], &[1.0]]));
        assert_eq!(c.push_forward(&AffineMap::identity(1)).unwrap(), c);
        assert!(c.push_forward(&AffineMap::identity(2)).is_err());
    }

    #[test]
    fn permutation_examples() {
        let e = s(&[&[0.0], &[1.0]]);
        let (r, sign) = permute(&[1, 0], &e).unwrap();
        assert_eq!((r, sign), (e.reversed(), -1));
        let t = s(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let (c, sign) = permute(&[1, 2, 0], &t).unwrap();
        assert_eq!(sign, 1);
        assert_eq!(c.vertices(), &[*t.vertex(2), *t.vertex(0), *t.vertex(1)]);
        assert_eq!(permute(&[0, 1, 2], &t).unwrap(), (t, 1));
        assert!(permute(&[0, 1], &t).is_err());
        assert!(permute(&[0, 0, 1], &t).is_err());
    }

    #[test]
    fn volumes() {
        assert_eq!(vol2(&s(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]])), 0.5);
        assert_eq!(diam(&s(&[&[0.0, 0.0], &[3.0, 0.0], &[0.0, 4.0]])), 5.0);
        assert_eq!(vol2(&s(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0]])), 0.0);
        let tet = s(&[
            &[0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0],
        ]);
        assert!((volk(&tet, 3) - 1.0 / 6.0).abs() < 1e-15);
        assert!((vol2(&tet) - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn degeneracy() {
        assert!(is_degenerate(&s(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0]])));
        assert!(!is_degenerate(&s(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]])));
        assert!(is_degenerate(&s(&[&[0.3, 0.1], &[0.3, 0.1]])));
    }

    #[test]
    fn parse_and_display() {
        let t: Simplex = "0,0; 1,0; 0,1".parse().unwrap();
        assert_eq!(t, s(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]));
        assert_eq!(t.to_string(), "0,0;1,0;0,1");
        assert!("0,0;1".parse::<Simplex>().is_err());
        assert!("a;1".parse::<Simplex>().is_err());
    }

    #[test]
    fn lerp_half_is_midpoint() {
        let a = Point::new(&[0.1, 0.7]).unwrap();
        let b = Point::new(&[0.3, -0.2]).unwrap();
        assert_eq!(Point::lerp(&a, &b, 0.5), Point::midpoint(&a, &b));
        assert_eq!(Point::midpoint(&a, &b), Point::midpoint(&b, &a));
    }
}
