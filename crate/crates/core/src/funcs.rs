//! Test functions and a small arithmetic expression language.
//!
//! Grammar:
//!
//! ```text
//! expr    = term { ("+" | "-") term }
//! term    = unary { ("*" | "/") unary }
//! unary   = "-" unary | power
//! power   = primary [ "^" unary ]
//! primary = number | ident | ident "(" expr { "," expr } ")" | "(" expr ")"
//! ident   = x | y | z | x1 … x8 | pi
//! ```
//!
//! Functions: sin cos exp log abs sqrt (one argument), min max pow (two),
//! weierstrass(a, b, K, t).

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrals::Scalar0;
use crate::simplex::{Point, MAX_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Abs,
    Sqrt,
    Min,
    Max,
    Pow,
    Weierstrass,
}

impl Func {
    const ALL: [Func; 10] = [
        Func::Sin,
        Func::Cos,
        Func::Exp,
        Func::Log,
        Func::Abs,
        Func::Sqrt,
        Func::Min,
        Func::Max,
        Func::Pow,
        Func::Weierstrass,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Min => "min",
            Func::Max => "max",
            Func::Pow => "pow",
            Func::Weierstrass => "weierstrass",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max | Func::Pow => 2,
            Func::Weierstrass => 4,
            _ => 1,
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Pi,
    /// Zero-based coordinate index.
    Var(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

/// `Σ_{k<K} aᵏ cos(bᵏ π t)`, reducing the phase modulo 2 before the cosine.
pub fn weierstrass(a: f64, b: f64, terms: usize, t: f64) -> f64 {
    let mut amp = 1.0;
    let mut freq = 1.0;
    let mut acc = 0.0;
    for _ in 0..terms {
        let phase = (freq * t).rem_euclid(2.0);
        acc += amp * (PI * phase).cos();
        amp *= a;
        freq *= b;
    }
    acc
}

impl Expr {
    /// Largest variable index plus one.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Pi => 0,
            Expr::Var(i) => i + 1,
            Expr::Neg(e) => e.arity(),
            Expr::Bin(_, a, b) => a.arity().max(b.arity()),
            Expr::Call(_, args) => args.iter().map(Expr::arity).max().unwrap_or(0),
        }
    }

    pub fn eval(&self, p: &Point) -> Result<f64> {
        Ok(match self {
            Expr::Num(x) => *x,
            Expr::Pi => PI,
            Expr::Var(i) => {
                if *i >= p.dim() {
                    return Err(Error::Dimension(format!(
                        "x{} used on a point of dimension {}",
                        i + 1,
                        p.dim()
                    )));
                }
                p.get(*i)
            }
            Expr::Neg(e) => -e.eval(p)?,
            Expr::Bin(op, a, b) => {
                let (x, y) = (a.eval(p)?, b.eval(p)?);
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(Error::Domain("division by zero".into()));
                        }
                        x / y
                    }
                    BinOp::Pow => power(x, y)?,
                }
            }
            Expr::Call(f, args) => {
                let mut v = [0.0; 4];
                for (slot, a) in v.iter_mut().zip(args) {
                    *slot = a.eval(p)?;
                }
                match f {
                    Func::Sin => v[0].sin(),
                    Func::Cos => v[0].cos(),
                    Func::Exp => v[0].exp(),
                    Func::Log => {
                        if v[0] <= 0.0 {
                            return Err(Error::Domain(format!("log({})", v[0])));
                        }
                        v[0].ln()
                    }
                    Func::Abs => v[0].abs(),
                    Func::Sqrt => {
                        if v[0] < 0.0 {
                            return Err(Error::Domain(format!("sqrt({})", v[0])));
                        }
                        v[0].sqrt()
                    }
                    Func::Min => v[0].min(v[1]),
                    Func::Max => v[0].max(v[1]),
                    Func::Pow => power(v[0], v[1])?,
                    Func::Weierstrass => {
                        if !(v[2] >= 0.0 && v[2] <= 1e4) {
                            return Err(Error::Domain(format!("weierstrass with {} terms", v[2])));
                        }
                        weierstrass(v[0], v[1], v[2] as usize, v[3])
                    }
                }
            }
        })
    }

    /// Binds the expression on `ℝ^dim`; evaluation errors become NaN.
    pub fn to_scalar(&self, dim: usize, label: impl Into<String>) -> Result<Scalar0> {
        if self.arity() > dim {
            return Err(Error::Dimension(format!(
                "expression uses x{} but the domain has dimension {dim}",
                self.arity()
            )));
        }
        let e = self.clone();
        Ok(Scalar0::new(label, move |p| e.eval(p).unwrap_or(f64::NAN)))
    }
}

fn power(x: f64, y: f64) -> Result<f64> {
    if x < 0.0 && y.fract() != 0.0 {
        return Err(Error::Domain(format!("{x}^{y}")));
    }
    if x == 0.0 && y < 0.0 {
        return Err(Error::Domain(format!("0^{y}")));
    }
    Ok(x.powf(y))
}

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_ATOM: u8 = 5;

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => PREC_ADD,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => PREC_MUL,
            Expr::Neg(_) => PREC_NEG,
            Expr::Bin(BinOp::Pow, ..) => 4,
            _ => PREC_ATOM,
        }
    }

    fn fmt_at(&self, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.fmt_at(0, f)?;
            return write!(f, ")");
        }
        match self {
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Pi => write!(f, "pi"),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.fmt_at(PREC_NEG, f)
            }
            Expr::Bin(op, a, b) => {
                let (sym, l, r) = match op {
                    BinOp::Add => (" + ", PREC_ADD, PREC_MUL),
                    BinOp::Sub => (" - ", PREC_ADD, PREC_MUL),
                    BinOp::Mul => ("*", PREC_MUL, PREC_NEG),
                    BinOp::Div => ("/", PREC_MUL, PREC_NEG),
                    BinOp::Pow => ("^", PREC_ATOM, PREC_NEG),
                };
                a.fmt_at(l, f)?;
                write!(f, "{sym}")?;
                b.fmt_at(r, f)
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    a.fmt_at(0, f)?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Prints with the fewest parentheses that parse back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(0, f)
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Expr> {
        parse_expr(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && b.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut j = i + 1;
                if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                    j += 1;
                }
                if j < b.len() && b[j].is_ascii_digit() {
                    while j < b.len() && b[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let v = text.parse::<f64>().map_err(|_| Error::Syntax {
                position: start,
                expected: "a number".into(),
            })?;
            out.push((Tok::Num(v), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Op(c), i));
            i += 1;
        } else {
            return Err(Error::Syntax {
                position: i,
                expected: "an operator, number or identifier".into(),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            position: self.offset(),
            expected: expected.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                BinOp::Add
            } else if self.eat('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                BinOp::Mul
            } else if self.eat('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.primary()?;
        if self.eat('^') {
            return Ok(Expr::Bin(
                BinOp::Pow,
                Box::new(base),
                Box::new(self.unary()?),
            ));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Expr::Num(v))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.fail("`)`");
                }
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let func = Func::from_name(&name).ok_or(Error::UnknownIdentifier {
                        name: name.clone(),
                        position: at,
                    })?;
                    let mut args = vec![self.expr()?];
                    while self.eat(',') {
                        args.push(self.expr()?);
                    }
                    if !self.eat(')') {
                        return self.fail("`,` or `)`");
                    }
                    if args.len() != func.arity() {
                        return Err(Error::Arity {
                            name,
                            expected: func.arity(),
                            got: args.len(),
                        });
                    }
                    return Ok(Expr::Call(func, args));
                }
                variable(&name).ok_or(Error::UnknownIdentifier { name, position: at })
            }
            _ => self.fail("a number, identifier or `(`"),
        }
    }
}

fn variable(name: &str) -> Option<Expr> {
    match name {
        "x" => Some(Expr::Var(0)),
        "y" => Some(Expr::Var(1)),
        "z" => Some(Expr::Var(2)),
        "pi" => Some(Expr::Pi),
        _ => {
            let i: usize = name.strip_prefix('x')?.parse().ok()?;
            (1..=MAX_DIM).contains(&i).then(|| Expr::Var(i - 1))
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return p.fail("an operator or end of input");
    }
    Ok(e)
}

pub fn eval_expr(e: &Expr, p: &Point) -> Result<f64> {
    e.eval(p)
}

/// A named catalog function with its Hölder metadata.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub params: Vec<(String, f64)>,
    pub scalar: Scalar0,
    /// Smooth on the whole space.
    pub smooth: bool,
}

/// `W(⟨dir, p⟩)` with `W = Σ_{k<K} aᵏ cos(bᵏ π ·)`; exponent `−ln a / ln b`.
pub fn weierstrass_scalar(a: f64, b: f64, terms: usize, dir: &[f64]) -> Result<Scalar0> {
    if !(a > 0.0 && a < 1.0 && b > 1.0) {
        return Err(Error::Parameter(format!(
            "weierstrass needs 0 < a < 1 < b, got a = {a}, b = {b}"
        )));
    }
    let dir = dir.to_vec();
    let alpha = (-a.ln() / b.ln()).min(1.0);
    let label = format!("W({a},{b},{terms})");
    Ok(Scalar0::new(label, move |p| {
        let t: f64 = dir.iter().zip(p.coords()).map(|(d, x)| d * x).sum();
        weierstrass(a, b, terms, t)
    })
    .with_holder(alpha, None))
}

/// Takagi-Landsberg function `Σ_{k<K} 2^{-αk} φ(2ᵏ t)`, `φ` the distance to
/// the nearest integer. Its increments over dyadic cells share a sign, so
/// sewing defects do not cancel across a dyadic subdivision.
pub fn takagi(alpha: f64, terms: usize, t: f64) -> f64 {
    let mut s = 0.0;
    let mut w = 1.0;
    let mut x = t;
    let decay = 2f64.powf(-alpha);
    for _ in 0..terms {
        s += w * (x - x.round()).abs();
        w *= decay;
        x *= 2.0;
    }
    s
}

/// `T_α(⟨dir, p⟩)`; Hölder exponent `alpha` for `0 < alpha < 1`.
pub fn takagi_scalar(alpha: f64, terms: usize, dir: &[f64]) -> Result<Scalar0> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Parameter(format!(
            "takagi needs 0 < alpha < 1, got {alpha}"
        )));
    }
    let dir = dir.to_vec();
    Ok(Scalar0::new(format!("T({alpha},{terms})"), move |p| {
        let t: f64 = dir.iter().zip(p.coords()).map(|(d, x)| d * x).sum();
        takagi(alpha, terms, t)
    })
    .with_holder(alpha, None))
}

/// Weierstrass parameters `(a, b)` with Hölder exponent `alpha` for `b = 3`.
pub fn weierstrass_for_exponent(alpha: f64) -> (f64, f64) {
    (3f64.powf(-alpha), 3.0)
}

fn entry(name: &str, params: Vec<(&str, f64)>, scalar: Scalar0, smooth: bool) -> CatalogEntry {
    CatalogEntry {
        name: name.into(),
        params: params
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        scalar,
        smooth,
    }
}

/// Smooth test functions on `ℝ^dim`.
pub fn smooth_catalog(dim: usize) -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for i in 0..dim {
        out.push(entry(
            "coordinate",
            vec![("axis", i as f64)],
            Scalar0::coordinate(i),
            true,
        ));
    }
    let dot =
        |w: Vec<f64>| move |p: &Point| w.iter().zip(p.coords()).map(|(a, b)| a * b).sum::<f64>();
    for (k, freq) in [1.0, 2.5, 4.0].into_iter().enumerate() {
        let w: Vec<f64> = (0..dim)
            .map(|i| 1.0 + 0.3 * i as f64 + 0.1 * k as f64)
            .collect();
        let d = dot(w.clone());
        let s = Scalar0::new(format!("sin({freq}·w{k}·p)"), move |p| {
            (freq * d(p)).sin()
        })
        .with_holder(1.0, None);
        out.push(entry("sine", vec![("freq", freq)], s, true));
        let d = dot(w);
        let c = Scalar0::new(format!("cos({freq}·w{k}·p)"), move |p| {
            (freq * d(p)).cos()
        })
        .with_holder(1.0, None);
        out.push(entry("cosine", vec![("freq", freq)], c, true));
    }
    for deg in [2, 3] {
        let s = Scalar0::new(format!("|p|^{deg}+p1"), move |p| {
            p.norm().powi(deg) + p.get(0)
        })
        .with_holder(1.0, None);
        out.push(entry("polynomial", vec![("degree", deg as f64)], s, true));
    }
    let e = Scalar0::new("exp(p1/2)", |p| (0.5 * p.get(0)).exp()).with_holder(1.0, None);
    out.push(entry("exponential", vec![], e, true));
    out
}

/// Hölder-rough test functions on `ℝ^dim`: Weierstrass along directions and
/// Takagi-Landsberg along the first axis.
pub fn rough_catalog(dim: usize) -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for &alpha in &[0.55, 0.63, 0.75, 0.9] {
        for k in 0..2usize {
            let dir: Vec<f64> = (0..dim)
                .map(|i| if (i + k) % 2 == 0 { 1.0 } else { 0.5 })
                .collect();
            let (a, b) = weierstrass_for_exponent(alpha);
            let s = weierstrass_scalar(a, b, 40, &dir).expect("valid parameters");
            out.push(entry(
                "weierstrass",
                vec![("a", a), ("b", b), ("alpha", alpha)],
                s,
                false,
            ));
        }
    }
    let axis: Vec<f64> = (0..dim).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();
    for &alpha in &[0.26, 0.5] {
        let s = takagi_scalar(alpha, 40, &axis).expect("valid parameters");
        out.push(entry("takagi", vec![("alpha", alpha)], s, false));
    }
    out
}

pub fn catalog(dim: usize) -> Vec<CatalogEntry> {
    let mut c = smooth_catalog(dim);
    c.extend(rough_catalog(dim));
    c
}

#[derive(Clone, Debug)]
pub struct HolderProbeConfig {
    pub dim: usize,
    pub lo: f64,
    pub hi: f64,
    /// Scales `(hi − lo)·2⁻ⁿ` for `n = 0..=max_scale`.
    pub max_scale: usize,
    pub pairs_per_scale: usize,
    pub seed: u64,
}

impl HolderProbeConfig {
    pub fn new(dim: usize) -> HolderProbeConfig {
        HolderProbeConfig {
            dim,
            lo: 0.0,
            hi: 1.0,
            max_scale: 16,
            pairs_per_scale: 64,
            seed: 0x401d,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HolderRow {
    pub alpha: f64,
    /// `sup |δf| / h^α` at each scale, coarse to fine.
    pub constants: Vec<f64>,
    pub plateau: f64,
    /// Fine-scale constants exceed coarse ones by more than a factor 3.
    pub blow_up: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HolderTable {
    pub scales: Vec<f64>,
    pub rows: Vec<HolderRow>,
}

/// Multi-scale difference quotients of `f` for each exponent.
pub fn holder_probe(f: &Scalar0, exponents: &[f64], cfg: &HolderProbeConfig) -> HolderTable {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let width = cfg.hi - cfg.lo;
    let scales: Vec<f64> = (0..=cfg.max_scale)
        .map(|n| width * 0.5f64.powi(n as i32))
        .collect();
    let mut sup = vec![0.0f64; scales.len()];
    for (k, &h) in scales.iter().enumerate() {
        for _ in 0..cfg.pairs_per_scale {
            let mut dir: Vec<f64> = (0..cfg.dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
            dir.iter_mut().for_each(|x| *x /= norm);
            let base: Vec<f64> = dir
                .iter()
                .map(|d| {
                    let span = (width - h * d.abs()).max(0.0);
                    cfg.lo + h * (-d).max(0.0) + rng.gen::<f64>() * span
                })
                .collect();
            let p = Point::from_slice_unchecked(&base);
            let q = Point::from_slice_unchecked(
                &base
                    .iter()
                    .zip(&dir)
                    .map(|(b, d)| b + h * d)
                    .collect::<Vec<_>>(),
            );
            let diff = (f.eval(&q) - f.eval(&p)).abs();
            if diff.is_finite() {
                sup[k] = sup[k].max(diff);
            }
        }
    }
    let quarter = (scales.len() / 4).max(1);
    let rows = exponents
        .iter()
        .map(|&alpha| {
            let constants: Vec<f64> = sup
                .iter()
                .zip(&scales)
                .map(|(s, h)| s / h.powf(alpha))
                .collect();
            let coarse = constants[..quarter].iter().fold(0.0f64, |m, x| m.max(*x));
            let fine = constants[constants.len() - quarter..]
                .iter()
                .fold(0.0f64, |m, x| m.max(*x));
            HolderRow {
                alpha,
                plateau: constants.iter().fold(0.0f64, |m, x| m.max(*x)),
                blow_up: fine > 3.0 * coarse && fine > 0.0,
                constants,
            }
        })
        .collect();
    HolderTable { scales, rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(xs: &[f64]) -> Point {
        Point::new(xs).unwrap()
    }

    #[test]
    fn parse_examples() {
        let e = parse_expr("x^2 + sin(y)").unwrap();
        let expected = Expr::Bin(
            BinOp::Add,
            Box::new(Expr::Bin(
                BinOp::Pow,
                Box::new(Expr::Var(0)),
                Box::new(Expr::Num(2.0)),
            )),
            Box::new(Expr::Call(Func::Sin, vec![Expr::Var(1)])),
        );
        assert_eq!(e, expected);
        let w = parse_expr("weierstrass(0.5, 3, 40, x)").unwrap();
        assert!(matches!(w, Expr::Call(Func::Weierstrass, ref a) if a.len() == 4));
        match parse_expr("x +") {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_expr("foo + 1"),
            Err(Error::UnknownIdentifier { position: 0, .. })
        ));
        assert!(matches!(
            parse_expr("sin(x, y)"),
            Err(Error::Arity {
                expected: 1,
                got: 2,
                ..
            })
        ));
        assert!(matches!(
            parse_expr("x9"),
            Err(Error::UnknownIdentifier { .. })
        ));
    }

    #[test]
    fn precedence() {
        let p = pt(&[2.0, 3.0]);
        let ev = |s: &str| parse_expr(s).unwrap().eval(&p).unwrap();
        assert_eq!(ev("-x^2"), -4.0);
        assert_eq!(ev("2^3^2"), 512.0);
        assert_eq!(ev("2^-1"), 0.5);
        assert_eq!(ev("x - y - 1"), -2.0);
        assert_eq!(ev("x / y * 3"), 2.0);
        assert_eq!(ev("1e-1 * 10 + .5"), 1.5);
    }

    #[test]
    fn eval_examples() {
        assert_eq!(parse_expr("2*x").unwrap().eval(&pt(&[3.0])).unwrap(), 6.0);
        assert_eq!(
            parse_expr("abs(x)").unwrap().eval(&pt(&[-2.0])).unwrap(),
            2.0
        );
        let w = parse_expr("weierstrass(0.5, 3, 40, x)")
            .unwrap()
            .eval(&pt(&[0.0]))
            .unwrap();
        assert!((w - 2.0 * (1.0 - 0.5f64.powi(40))).abs() < 1e-15);
        assert!(matches!(
            parse_expr("log(x)").unwrap().eval(&pt(&[0.0])),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            parse_expr("y").unwrap().eval(&pt(&[0.0])),
            Err(Error::Dimension(_))
        ));
        assert!(parse_expr("y").unwrap().to_scalar(1, "y").is_err());
    }

    #[test]
    fn display_is_minimal() {
        for s in [
            "x1^2 + sin(x2)",
            "-(x1 + 1)^2",
            "x1 - (x2 - x3)",
            "(x1^x2)^x3",
            "x1^-x2",
            "(-x1)^2",
            "x1*-x2",
        ] {
            assert_eq!(parse_expr(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn weierstrass_tail_bound() {
        for t in [0.1, 0.37, 0.9] {
            let d = (weierstrass(0.5, 3.0, 40, t) - weierstrass(0.5, 3.0, 50, t)).abs();
            assert!(d <= 0.5f64.powi(40) / 0.5 * (1.0 + 1e-9));
        }
    }

    #[test]
    fn holder_probe_examples() {
        let cfg = HolderProbeConfig::new(1);
        let id = holder_probe(&Scalar0::coordinate(0), &[1.0, 0.5], &cfg);
        assert!((id.rows[0].plateau - 1.0).abs() < 1e-9);
        assert!(!id.rows[1].blow_up);
        let c = holder_probe(&Scalar0::constant(2.0), &[0.5], &cfg);
        assert!(c.rows[0].constants.iter().all(|x| *x == 0.0));
        let w = weierstrass_scalar(0.5, 3.0, 40, &[1.0]).unwrap();
        let t = holder_probe(&w, &[0.63, 0.8], &cfg);
        assert!(!t.rows[0].blow_up, "{:?}", t.rows[0].constants);
        assert!(t.rows[1].blow_up, "{:?}", t.rows[1].constants);
    }
}
