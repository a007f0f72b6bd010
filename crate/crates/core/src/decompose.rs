//! Geometric maps on simplices: dyadic decomposition, edge cutting and edge
//! flipping, as chain-valued operators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::{Chain, Point, Simplex};

/// Largest admissible `k·n` for a depth-n dyadic traversal of a k-simplex.
pub const BUDGET: usize = 30;

/// Which dyadic decomposition drives a refinement.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    #[default]
    Dya,
    /// Central triangle reversed and negated, so that `∂ dya† = dya ∂`.
    DyaDagger,
}

fn point(s: &Simplex, i: usize) -> Point {
    *s.vertex(i)
}

fn tri(a: Point, b: Point, c: Point) -> Simplex {
    Simplex::from_points_unchecked(&[a, b, c])
}

fn seg(a: Point, b: Point) -> Simplex {
    Simplex::from_points_unchecked(&[a, b])
}

/// Calls `f(weight, child)` for the children of one dyadic step, in the
/// order dya¹ … dya⁴. Degrees other than 1 and 2 produce no children.
pub(crate) fn for_each_child(s: &Simplex, variant: Variant, mut f: impl FnMut(f64, Simplex)) {
    match s.degree() {
        1 => {
            let (p0, p1) = (point(s, 0), point(s, 1));
            let q = Point::midpoint(&p0, &p1);
            f(1.0, seg(p0, q));
            f(1.0, seg(q, p1));
        }
        2 => {
            let (p0, p1, p2) = (point(s, 0), point(s, 1), point(s, 2));
            let q0 = Point::midpoint(&p1, &p2);
            let q1 = Point::midpoint(&p0, &p2);
            let q2 = Point::midpoint(&p0, &p1);
            match variant {
                Variant::Dya => f(1.0, tri(q0, q1, q2)),
                Variant::DyaDagger => f(-1.0, tri(q2, q1, q0)),
            }
            f(1.0, tri(q1, q0, p2));
            f(1.0, tri(q2, p1, q0));
            f(1.0, tri(p0, q2, q1));
        }
        _ => {}
    }
}

fn require_degree(s: &Simplex, allowed: &[usize], what: &str) -> Result<()> {
    if allowed.contains(&s.degree()) {
        Ok(())
    } else {
        Err(Error::Degree(format!(
            "{what} is defined on degrees {allowed:?}, got a {}-simplex",
            s.degree()
        )))
    }
}

fn children_chain(s: &Simplex, variant: Variant) -> Chain {
    let mut terms = Vec::with_capacity(4);
    for_each_child(s, variant, |w, c| terms.push((w, c)));
    Chain::from_terms_unchecked(s.degree(), terms)
}

/// Midpoint halves of a segment or the four midpoint triangles.
pub fn dya(s: &Simplex) -> Result<Chain> {
    require_degree(s, &[1, 2], "dya")?;
    Ok(children_chain(s, Variant::Dya))
}

/// `-σ dya¹ + dya² + dya³ + dya⁴` with `σ[pqr] = [rqp]`.
pub fn dya_dagger(s: &Simplex) -> Result<Chain> {
    require_degree(s, &[2], "dya_dagger")?;
    Ok(children_chain(s, Variant::DyaDagger))
}

fn check_t(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "cut parameter t = {t} outside [0, 1]"
        )))
    }
}

/// Cuts the edge `p0 p1` at `p_t = (1-t) p0 + t p1`.
///
/// On `[p p0 p1]` the result is `[p_t p1 p] + [p_t p p0]`.
pub fn cut_t(t: f64, s: &Simplex) -> Result<Chain> {
    require_degree(s, &[1, 2], "cut_t")?;
    check_t(t)?;
    let terms = if s.degree() == 1 {
        let (p0, p1) = (point(s, 0), point(s, 1));
        let pt = Point::lerp(&p0, &p1, t);
        vec![(1.0, seg(p0, pt)), (1.0, seg(pt, p1))]
    } else {
        let (p, p0, p1) = (point(s, 0), point(s, 1), point(s, 2));
        let pt = Point::lerp(&p0, &p1, t);
        vec![(1.0, tri(pt, p1, p)), (1.0, tri(pt, p, p0))]
    };
    Ok(Chain::from_terms_unchecked(s.degree(), terms))
}

/// Splits the edge `p0 p1` into `n` equal pieces: `n` segments, or `n` fan
/// triangles `[p p_{j/n} p_{(j+1)/n}]` with common apex `p`.
pub fn cut_n(n: usize, s: &Simplex) -> Result<Chain> {
    require_degree(s, &[1, 2], "cut_n")?;
    if n == 0 {
        return Err(Error::Parameter("cut_n needs n >= 1".into()));
    }
    let (apex, a, b) = if s.degree() == 1 {
        (None, point(s, 0), point(s, 1))
    } else {
        (Some(point(s, 0)), point(s, 1), point(s, 2))
    };
    let node = |j: usize| -> Point {
        if j == 0 {
            a
        } else if j == n {
            b
        } else {
            Point::lerp(&a, &b, j as f64 / n as f64)
        }
    };
    let terms = (0..n)
        .map(|j| {
            let (x, y) = (node(j), node(j + 1));
            let s = match apex {
                None => seg(x, y),
                Some(p) => tri(p, x, y),
            };
            (1.0, s)
        })
        .collect();
    Ok(Chain::from_terms_unchecked(s.degree(), terms))
}

fn parallelogram_point(s: &Simplex) -> Point {
    point(s, 1).add(&point(s, 2)).sub(&point(s, 0))
}

/// `π - π̃` with `π = [p0p1p2] + [p3p2p1]`, `π̃ = [p1p3p0] + [p2p0p3]` and
/// `p3 = p1 + p2 - p0`. No check is made that `p3` stays in any domain.
pub fn flip(s: &Simplex) -> Result<Chain> {
    require_degree(s, &[2], "flip")?;
    let (p0, p1, p2) = (point(s, 0), point(s, 1), point(s, 2));
    let p3 = parallelogram_point(s);
    Ok(Chain::from_terms_unchecked(
        2,
        vec![
            (1.0, tri(p0, p1, p2)),
            (1.0, tri(p3, p2, p1)),
            (-1.0, tri(p1, p3, p0)),
            (-1.0, tri(p2, p0, p3)),
        ],
    ))
}

/// Flip with changed base points: `[p2p0p1] + [p1p3p2] - [p3p0p1] - [p0p3p2]`.
pub fn flip_dagger(s: &Simplex) -> Result<Chain> {
    require_degree(s, &[2], "flip_dagger")?;
    let (p0, p1, p2) = (point(s, 0), point(s, 1), point(s, 2));
    let p3 = parallelogram_point(s);
    Ok(Chain::from_terms_unchecked(
        2,
        vec![
            (1.0, tri(p2, p0, p1)),
            (1.0, tri(p1, p3, p2)),
            (-1.0, tri(p3, p0, p1)),
            (-1.0, tri(p0, p3, p2)),
        ],
    ))
}

/// The geometric maps as values, for uniform testing and dispatch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GeometricMap {
    Dya,
    DyaDagger,
    Cut(f64),
    CutN(usize),
    Flip,
    FlipDagger,
}

impl GeometricMap {
    pub fn name(&self) -> &'static str {
        match self {
            GeometricMap::Dya => "dya",
            GeometricMap::DyaDagger => "dya_dagger",
            GeometricMap::Cut(_) => "cut_t",
            GeometricMap::CutN(_) => "cut_n",
            GeometricMap::Flip => "flip",
            GeometricMap::FlipDagger => "flip_dagger",
        }
    }

    /// Input degrees accepted by the map; the output has the same degree.
    pub fn degrees(&self) -> &'static [usize] {
        match self {
            GeometricMap::Dya | GeometricMap::Cut(_) | GeometricMap::CutN(_) => &[1, 2],
            _ => &[2],
        }
    }

    pub fn apply(&self, s: &Simplex) -> Result<Chain> {
        match *self {
            GeometricMap::Dya => dya(s),
            GeometricMap::DyaDagger => dya_dagger(s),
            GeometricMap::Cut(t) => cut_t(t, s),
            GeometricMap::CutN(n) => cut_n(n, s),
            GeometricMap::Flip => flip(s),
            GeometricMap::FlipDagger => flip_dagger(s),
        }
    }

    /// Applies the map to every term of a chain.
    pub fn apply_chain(&self, c: &Chain) -> Result<Chain> {
        let mut out = Chain::new(c.degree());
        for (w, s) in c.terms() {
            for (v, t) in self.apply(s)?.terms() {
                out.push(w * v, *t)?;
            }
        }
        Ok(out)
    }
}

/// Checks the `k·n <= BUDGET` cost cap.
pub fn check_budget(degree: usize, n: usize) -> Result<()> {
    let cost = degree * n;
    if cost > BUDGET {
        Err(Error::Budget { cost, cap: BUDGET })
    } else {
        Ok(())
    }
}

/// Depth-first stream of the weighted leaves of `dyaⁿ S`.
#[derive(Clone, Debug)]
pub struct DyaIter {
    stack: Vec<(f64, Simplex, usize)>,
    depth: usize,
    variant: Variant,
}

impl Iterator for DyaIter {
    type Item = (f64, Simplex);

    fn next(&mut self) -> Option<(f64, Simplex)> {
        while let Some((w, s, d)) = self.stack.pop() {
            if d == self.depth {
                return Some((w, s));
            }
            let mut kids: [(f64, Option<Simplex>); 4] = [(0.0, None); 4];
            let mut m = 0;
            for_each_child(&s, self.variant, |v, c| {
                kids[m] = (v, Some(c));
                m += 1;
            });
            for (v, c) in kids[..m].iter().rev() {
                self.stack.push((w * v, c.expect("child"), d + 1));
            }
        }
        None
    }
}

/// Lazy traversal of the `2^{kn}` leaves of `dyaⁿ S` (or `dya†ⁿ S`), with
/// children visited in the order dya¹ … dya⁴.
pub fn dya_iter(n: usize, s: &Simplex, variant: Variant) -> Result<DyaIter> {
    if n > 0 {
        require_degree(s, &[1, 2], "dya_iter")?;
    }
    check_budget(s.degree(), n)?;
    Ok(DyaIter {
        stack: vec![(1.0, *s, 0)],
        depth: n,
        variant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::{eval_chain, signed_area};
    use crate::simplex::diam;

    fn s(rows: &[&[f64]]) -> Simplex {
        Simplex::from_coords(rows).unwrap()
    }

    fn unit() -> Simplex {
        s(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]])
    }

    #[test]
    fn dya_segment_and_triangle() {
        let c = dya(&s(&[&[0.0], &[1.0]])).unwrap();
        assert_eq!(c.terms()[0].1, s(&[&[0.0], &[0.5]]));
        assert_eq!(c.terms()[1].1, s(&[&[0.5], &[1.0]]));
        let c = dya(&unit()).unwrap();
        let expect = [
            s(&[&[0.5, 0.5], &[0.0, 0.5], &[0.5, 0.0]]),
            s(&[&[0.0, 0.5], &[0.5, 0.5], &[0.0, 1.0]]),
            s(&[&[0.5, 0.0], &[1.0, 0.0], &[0.5, 0.5]]),
            s(&[&[0.0, 0.0], &[0.5, 0.0], &[0.0, 0.5]]),
        ];
        for (t, e) in c.terms().iter().zip(expect) {
            assert_eq!(*t, (1.0, e));
        }
    }

    #[test]
    fn dya_dagger_central_term() {
        let c = dya_dagger(&unit()).unwrap();
        assert_eq!(
            c.terms()[0],
            (-1.0, s(&[&[0.5, 0.0], &[0.0, 0.5], &[0.5, 0.5]]))
        );
        let area = signed_area(0, 1);
        assert_eq!(
            eval_chain(&area, &c).unwrap(),
            eval_chain(&area, &dya(&unit()).unwrap()).unwrap()
        );
    }

    #[test]
    fn cut_examples() {
        let e = s(&[&[0.0], &[1.0]]);
        assert_eq!(cut_t(0.5, &e).unwrap(), dya(&e).unwrap());
        assert!(cut_t(1.5, &e).is_err());
        let c = cut_t(0.5, &unit()).unwrap();
        assert_eq!(c.terms()[0].1, s(&[&[0.5, 0.5], &[0.0, 1.0], &[0.0, 0.0]]));
        assert_eq!(c.terms()[1].1, s(&[&[0.5, 0.5], &[0.0, 0.0], &[1.0, 0.0]]));
        let c3 = cut_n(3, &e).unwrap();
        assert_eq!(c3.len(), 3);
        assert_eq!(c3.terms()[0].1.vertex(0).get(0), 0.0);
        assert!((c3.terms()[1].1.vertex(0).get(0) - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(c3.terms()[2].1.vertex(1).get(0), 1.0);
        let c5 = cut_n(5, &unit()).unwrap();
        assert_eq!(c5.len(), 5);
        assert!(c5
            .terms()
            .iter()
            .all(|(_, t)| t.vertex(0) == unit().vertex(0)));
    }

    #[test]
    fn flip_cancels_on_area() {
        let t = s(&[&[0.1, 0.2], &[0.7, 0.3], &[0.2, 0.9]]);
        let area = signed_area(0, 1);
        assert!(eval_chain(&area, &flip(&t).unwrap()).unwrap().abs() < 1e-15);
        assert!(eval_chain(&area, &flip_dagger(&t).unwrap()).unwrap().abs() < 1e-15);
    }

    #[test]
    fn iterator_counts_and_budget() {
        let t = unit();
        let leaves: Vec<_> = dya_iter(3, &t, Variant::Dya).unwrap().collect();
        assert_eq!(leaves.len(), 64);
        for (_, l) in &leaves {
            assert!((diam(l) - diam(&t) / 8.0).abs() < 1e-15);
        }
        let total: f64 = leaves
            .iter()
            .map(|(w, l)| w * signed_area(0, 1).eval(l))
            .sum();
        assert_eq!(total, 0.5);
        assert_eq!(
            dya_iter(0, &t, Variant::Dya).unwrap().collect::<Vec<_>>(),
            vec![(1.0, t)]
        );
        assert!(matches!(
            dya_iter(16, &t, Variant::Dya),
            Err(Error::Budget { .. })
        ));
    }
}
