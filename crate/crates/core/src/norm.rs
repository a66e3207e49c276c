//! Invariant Minkowski norms on m described through an `L`-function of the
//! summand invariants.
//!
//! A norm compatible with the isotypic structure depends on `y` only through
//! `t_p = |y_p|^2` for each summand, plus the signed coordinate `y_s` on a
//! one-dimensional last summand when the norm is non-reversible.  The
//! fundamental tensor then has a closed form in any orthonormal basis
//! adapted to the summands; all `L`-derivatives are taken with second-order
//! dual numbers, so there is no truncation error.

use crate::coset::ReductiveSplit;
use crate::dual::Dual2;
use crate::error::{Error, Result};
use crate::liealg::AlgebraVector;
use nalgebra::{DMatrix, DVector};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::fmt;

pub const M_COMPONENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormShape {
    /// L = L(t_1, ..., t_s)
    Reversible,
    /// L = L(t_1, ..., t_{s-1}, y_s) with dim m_s = 1
    NonReversible,
}

impl NormShape {
    pub fn as_str(&self) -> &'static str {
        match self {
            NormShape::Reversible => "reversible",
            NormShape::NonReversible => "nonreversible",
        }
    }
}

impl std::str::FromStr for NormShape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reversible" => Ok(NormShape::Reversible),
            "nonreversible" => Ok(NormShape::NonReversible),
            other => Err(Error::InvalidArgument(format!("unknown shape {other:?}"))),
        }
    }
}

/// Expression tree for user-supplied `L`-functions.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Variable index into the L-variable list.
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Sqrt(Box<Expr>),
    Pow(Box<Expr>, f64),
}

impl Expr {
    pub fn eval(&self, vars: &[Dual2]) -> Dual2 {
        match self {
            Expr::Num(c) => Dual2::constant(*c),
            Expr::Var(i) => vars[*i],
            Expr::Add(a, b) => a.eval(vars) + b.eval(vars),
            Expr::Sub(a, b) => a.eval(vars) - b.eval(vars),
            Expr::Mul(a, b) => a.eval(vars) * b.eval(vars),
            Expr::Div(a, b) => a.eval(vars) / b.eval(vars),
            Expr::Neg(a) => -a.eval(vars),
            Expr::Sqrt(a) => a.eval(vars).sqrt(),
            Expr::Pow(a, p) => a.eval(vars).powf(*p),
        }
    }

    /// Parse an expression over variables named `t1..t9` and `ys`.
    /// `num_t` is the number of t-variables; `ys` (allowed only when
    /// `has_ys`) maps to index `num_t`.
    pub fn parse(src: &str, num_t: usize, has_ys: bool) -> Result<Expr> {
        let mut p = Parser {
            toks: tokenize(src)?,
            pos: 0,
            num_t,
            has_ys,
            src,
        };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) => write!(f, "{c}"),
            Expr::Var(i) => write!(f, "t{}", i + 1), // ys rendered by caller context
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Pow(a, p) => write!(f, "({a})^{p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let bytes: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == '.') {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                let v = s.parse::<f64>().map_err(|_| {
                    Error::InvalidArgument(format!("bad number {s:?} in expression"))
                })?;
                out.push(Tok::Num(v));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(bytes[start..i].iter().collect()));
            }
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unexpected character {other:?} in expression"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    num_t: usize,
    has_ys: bool,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::InvalidArgument(format!("{msg} in expression {:?}", self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let neg = if let Some(Tok::Minus) = self.peek() {
                self.pos += 1;
                true
            } else {
                false
            };
            match self.next() {
                Some(Tok::Num(p)) => {
                    let p = if neg { -p } else { p };
                    Ok(Expr::Pow(Box::new(base), p))
                }
                _ => Err(self.err("expected numeric exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(Expr::Num(v)),
            Some(Tok::Minus) => Ok(Expr::Neg(Box::new(self.atom()?))),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(self.err("missing closing parenthesis")),
                }
            }
            Some(Tok::Ident(name)) => {
                if name == "sqrt" {
                    match self.next() {
                        Some(Tok::LParen) => {}
                        _ => return Err(self.err("sqrt needs parentheses")),
                    }
                    let e = self.expr()?;
                    match self.next() {
                        Some(Tok::RParen) => Ok(Expr::Sqrt(Box::new(e))),
                        _ => Err(self.err("missing closing parenthesis")),
                    }
                } else if name == "ys" {
                    if !self.has_ys {
                        Err(self.err("ys is only available for nonreversible norms"))
                    } else {
                        Ok(Expr::Var(self.num_t))
                    }
                } else if let Some(rest) = name.strip_prefix('t') {
                    let idx: usize = rest
                        .parse()
                        .map_err(|_| self.err(&format!("unknown variable {name:?}")))?;
                    if idx == 0 || idx > self.num_t {
                        Err(self.err(&format!("variable {name:?} out of range")))
                    } else {
                        Ok(Expr::Var(idx - 1))
                    }
                } else {
                    Err(self.err(&format!("unknown identifier {name:?}")))
                }
            }
            _ => Err(self.err("unexpected end of expression")),
        }
    }
}

/// The kind of `L`-function.
#[derive(Debug, Clone, PartialEq)]
pub enum NormKind {
    /// L = sum_p c_p t_p (+ c_s ys^2 for the nonreversible shape).
    Diagonal { coeffs: Vec<f64> },
    /// L = (sqrt(sum_{p<s} c_p t_p + ys^2) + b*ys)^2, always nonreversible
    /// for b != 0.
    Randers { coeffs: Vec<f64>, b: f64 },
    /// Arbitrary 1-homogeneous expression in t (2-homogeneous counting ys
    /// with weight 1/2).
    Generic { expr: Expr, source: String },
    /// min over the fiber coordinate of a parent norm; always reversible in
    /// the remaining variables.
    Induced { parent: Box<LFunction> },
}

/// An invariant Minkowski norm together with the summand structure it is
/// defined on.
#[derive(Debug, Clone, PartialEq)]
pub struct LFunction {
    pub shape: NormShape,
    pub kind: NormKind,
    pub summand_dims: Vec<usize>,
}

impl LFunction {
    pub fn new(shape: NormShape, kind: NormKind, summand_dims: Vec<usize>) -> Result<LFunction> {
        let s = summand_dims.len();
        if s == 0 {
            return Err(Error::InvalidArgument("no summands".into()));
        }
        if shape == NormShape::NonReversible && summand_dims[s - 1] != 1 {
            return Err(Error::WrongNormShape(
                "nonreversible norms need a one-dimensional last summand".into(),
            ));
        }
        match &kind {
            NormKind::Diagonal { coeffs } => {
                if coeffs.len() != s {
                    return Err(Error::InvalidArgument(format!(
                        "diagonal norm needs {s} coefficients, got {}",
                        coeffs.len()
                    )));
                }
                if coeffs.iter().any(|&c| c <= 0.0) {
                    return Err(Error::ConvexityViolation(
                        "diagonal coefficients must be positive".into(),
                    ));
                }
            }
            NormKind::Randers { coeffs, b } => {
                if shape != NormShape::NonReversible {
                    return Err(Error::WrongNormShape(
                        "randers norms are nonreversible".into(),
                    ));
                }
                if coeffs.len() != s - 1 {
                    return Err(Error::InvalidArgument(format!(
                        "randers norm needs {} coefficients, got {}",
                        s - 1,
                        coeffs.len()
                    )));
                }
                if coeffs.iter().any(|&c| c <= 0.0) || b.abs() >= 1.0 {
                    return Err(Error::ConvexityViolation(
                        "randers data must have positive coefficients and |b| < 1".into(),
                    ));
                }
            }
            NormKind::Generic { .. } => {}
            NormKind::Induced { parent } => {
                if shape != NormShape::Reversible {
                    return Err(Error::WrongNormShape("induced norms are reversible".into()));
                }
                if parent.shape != NormShape::NonReversible {
                    return Err(Error::InvalidArgument(
                        "induced norms reduce a nonreversible parent".into(),
                    ));
                }
            }
        }
        Ok(LFunction {
            shape,
            kind,
            summand_dims,
        })
    }

    /// Number of L-variables: t per summand, with ys replacing the last t
    /// for nonreversible norms.
    pub fn num_vars(&self) -> usize {
        self.summand_dims.len()
    }

    fn num_t(&self) -> usize {
        match self.shape {
            NormShape::Reversible => self.summand_dims.len(),
            NormShape::NonReversible => self.summand_dims.len() - 1,
        }
    }

    /// Evaluate L over dual numbers.
    pub fn eval_l(&self, vars: &[Dual2]) -> Dual2 {
        match &self.kind {
            NormKind::Diagonal { coeffs } => {
                let mut acc = Dual2::constant(0.0);
                for (p, &c) in coeffs.iter().enumerate() {
                    if self.shape == NormShape::NonReversible && p == coeffs.len() - 1 {
                        acc += vars[p] * vars[p] * c;
                    } else {
                        acc += vars[p] * c;
                    }
                }
                acc
            }
            NormKind::Randers { coeffs, b } => {
                let ys = vars[coeffs.len()];
                let mut q = ys * ys;
                for (p, &c) in coeffs.iter().enumerate() {
                    q += vars[p] * c;
                }
                let root = q.sqrt() + ys * *b;
                root * root
            }
            NormKind::Generic { expr, .. } => expr.eval(vars),
            NormKind::Induced { parent } => induced_eval(parent, vars),
        }
    }

    /// Extract L-variables from m-basis coordinates.
    pub fn vars_of(&self, y: &DVector<f64>) -> Vec<f64> {
        let mut vars = Vec::with_capacity(self.num_vars());
        let mut off = 0;
        let nt = self.num_t();
        for (p, &d) in self.summand_dims.iter().enumerate() {
            if p < nt {
                vars.push((off..off + d).map(|i| y[i] * y[i]).sum());
            } else {
                vars.push(y[off]);
            }
            off += d;
        }
        vars
    }

    /// F(y) for y given in m-basis coordinates.
    pub fn norm_coords(&self, y: &DVector<f64>) -> Result<f64> {
        let expect: usize = self.summand_dims.iter().sum();
        if y.len() != expect {
            return Err(Error::DimensionMismatch {
                expected: expect,
                got: y.len(),
            });
        }
        let vars: Vec<Dual2> = self.vars_of(y).iter().map(|&v| Dual2::constant(v)).collect();
        let l = self.eval_l(&vars).re;
        if l < 0.0 {
            return Err(Error::ConvexityViolation(format!(
                "L evaluated to {l:.3e} < 0"
            )));
        }
        Ok(l.sqrt())
    }

    /// F(y) for an algebra vector; errors when y has an h-component.
    pub fn eval_norm(&self, split: &ReductiveSplit, y: &AlgebraVector) -> Result<f64> {
        let c = coords_checked(split, y)?;
        self.norm_coords(&c)
    }

    /// Gradient and Hessian of L at the given variable values.
    pub fn l_derivatives(&self, vars: &[f64]) -> (f64, DVector<f64>, DMatrix<f64>) {
        let n = vars.len();
        let mut grad = DVector::zeros(n);
        let mut hess = DMatrix::zeros(n, n);
        let mut l0 = 0.0;
        for i in 0..n {
            for j in i..n {
                let seeded: Vec<Dual2> = vars
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| {
                        Dual2::new(
                            v,
                            if k == i { 1.0 } else { 0.0 },
                            if k == j { 1.0 } else { 0.0 },
                            0.0,
                        )
                    })
                    .collect();
                let d = self.eval_l(&seeded);
                l0 = d.re;
                grad[i] = d.e1;
                hess[(i, j)] = d.e12;
                hess[(j, i)] = d.e12;
            }
        }
        (l0, grad, hess)
    }

    /// Fundamental tensor g_y in the orthonormal m-basis: half the Hessian
    /// of F^2 = L at y, assembled from the closed form.
    pub fn fundamental_tensor_coords(&self, y: &DVector<f64>) -> Result<DMatrix<f64>> {
        let dm: usize = self.summand_dims.iter().sum();
        if y.len() != dm {
            return Err(Error::DimensionMismatch {
                expected: dm,
                got: y.len(),
            });
        }
        if y.norm() < 1e-14 {
            return Err(Error::DegenerateFlag(
                "fundamental tensor at y = 0".into(),
            ));
        }
        let vars = self.vars_of(y);
        let (_, grad, hess) = self.l_derivatives(&vars);
        let nt = self.num_t();
        // summand index and variable weight per coordinate
        let mut pidx = Vec::with_capacity(dm);
        for (p, &d) in self.summand_dims.iter().enumerate() {
            for _ in 0..d {
                pidx.push(p);
            }
        }
        let is_ys = |i: usize| self.shape == NormShape::NonReversible && pidx[i] == nt;
        let mut g = DMatrix::zeros(dm, dm);
        for i in 0..dm {
            for j in 0..dm {
                let v = if is_ys(i) && is_ys(j) {
                    0.5 * hess[(nt, nt)]
                } else if is_ys(i) {
                    hess[(pidx[j], nt)] * y[j]
                } else if is_ys(j) {
                    hess[(pidx[i], nt)] * y[i]
                } else {
                    let mut v = 2.0 * hess[(pidx[i], pidx[j])] * y[i] * y[j];
                    if i == j {
                        v += grad[pidx[i]];
                    }
                    v
                };
                g[(i, j)] = v;
            }
        }
        Ok(g)
    }

    /// Fundamental tensor for an algebra vector y.
    pub fn fundamental_tensor(
        &self,
        split: &ReductiveSplit,
        y: &AlgebraVector,
    ) -> Result<DMatrix<f64>> {
        let c = coords_checked(split, y)?;
        self.fundamental_tensor_coords(&c)
    }

    /// Central-difference Hessian of F^2/2, an independent oracle for the
    /// closed-form fundamental tensor.
    pub fn fd_hessian_oracle(&self, y: &DVector<f64>, step: f64) -> Result<DMatrix<f64>> {
        let dm: usize = self.summand_dims.iter().sum();
        let f2 = |z: &DVector<f64>| -> Result<f64> {
            let vars: Vec<Dual2> = self.vars_of(z).iter().map(|&v| Dual2::constant(v)).collect();
            Ok(0.5 * self.eval_l(&vars).re)
        };
        let mut h = DMatrix::zeros(dm, dm);
        for i in 0..dm {
            for j in 0..dm {
                let mut zpp = y.clone();
                let mut zpm = y.clone();
                let mut zmp = y.clone();
                let mut zmm = y.clone();
                zpp[i] += step;
                zpp[j] += step;
                zpm[i] += step;
                zpm[j] -= step;
                zmp[i] -= step;
                zmp[j] += step;
                zmm[i] -= step;
                zmm[j] -= step;
                h[(i, j)] = (f2(&zpp)? - f2(&zpm)? - f2(&zmp)? + f2(&zmm)?) / (4.0 * step * step);
            }
        }
        Ok(h)
    }

    /// Max residual of the differentiated Euler identity
    /// `sum_p t_p L_pq = 0` (reversible shape only) at the given point,
    /// together with the homogeneity defect `|sum_p t_p L_p (+ ys L_ys / 2) - L|`.
    pub fn check_euler_identity(&self, vars: &[f64]) -> (f64, f64) {
        let (l0, grad, hess) = self.l_derivatives(vars);
        let nt = self.num_t();
        let mut hom = -l0;
        for p in 0..nt {
            hom += vars[p] * grad[p];
        }
        if self.shape == NormShape::NonReversible {
            hom += 0.5 * vars[nt] * grad[nt];
        }
        let mut worst = 0.0_f64;
        for q in 0..vars.len() {
            let mut acc = 0.0;
            for p in 0..nt {
                acc += vars[p] * hess[(p, q)];
            }
            if self.shape == NormShape::NonReversible {
                acc += 0.5 * vars[nt] * hess[(nt, q)];
                // differentiating the weighted Euler relation in a direction
                // q also picks up half the gradient in the ys slot
                if q == nt {
                    acc -= 0.5 * grad[nt];
                }
            }
            worst = worst.max(acc.abs());
        }
        (hom.abs(), worst)
    }

    /// Smallest eigenvalue of the fundamental tensor over `n` random unit
    /// directions y.
    pub fn convexity_sample(&self, n: usize, seed: u64) -> Result<f64> {
        let dm: usize = self.summand_dims.iter().sum();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = f64::INFINITY;
        for _ in 0..n {
            let mut y = DVector::from_fn(dm, |_, _| {
                // Box-Muller keeps the direction distribution rotation-free
                let u: f64 = rng.random::<f64>().max(1e-12);
                let v: f64 = rng.random();
                (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
            });
            let n2 = y.norm();
            if n2 < 1e-8 {
                continue;
            }
            y /= n2;
            let g = self.fundamental_tensor_coords(&y)?;
            let ev = crate::linalg::sym_eigenvalues(&g);
            worst = worst.min(ev[0]);
        }
        Ok(worst)
    }

    /// The norm induced on m' = m_1 + ... + m_{s-1} by minimizing over the
    /// fiber coordinate:  F'(y') = min_r F(y' + r e_s).
    ///
    /// Diagonal and Randers kinds reduce in closed form; generic kinds fall
    /// back to numeric minimization with envelope-theorem derivatives.
    pub fn induced_submersion_norm(&self) -> Result<LFunction> {
        if self.shape != NormShape::NonReversible {
            return Err(Error::WrongNormShape(
                "submersion reduction needs a nonreversible-shape norm".into(),
            ));
        }
        let base_dims: Vec<usize> =
            self.summand_dims[..self.summand_dims.len() - 1].to_vec();
        match &self.kind {
            NormKind::Diagonal { coeffs } => {
                // min over ys is at ys = 0
                let c = coeffs[..coeffs.len() - 1].to_vec();
                LFunction::new(
                    NormShape::Reversible,
                    NormKind::Diagonal { coeffs: c },
                    base_dims,
                )
            }
            NormKind::Randers { coeffs, b } => {
                // min_r (sqrt(a^2 + r^2) + b r)^2 = (1 - b^2) a^2
                let c: Vec<f64> = coeffs.iter().map(|&x| (1.0 - b * b) * x).collect();
                LFunction::new(
                    NormShape::Reversible,
                    NormKind::Diagonal { coeffs: c },
                    base_dims,
                )
            }
            _ => LFunction::new(
                NormShape::Reversible,
                NormKind::Induced {
                    parent: Box::new(self.clone()),
                },
                base_dims,
            ),
        }
    }
}

/// Evaluate `L'(t) = min_ys L(t, ys)` with exact first/second derivatives
/// through the implicit-function theorem: at the minimizer, L'_p = L_p and
/// L'_pq = L_pq - L_ps L_qs / L_ss.
fn induced_eval(parent: &LFunction, vars: &[Dual2]) -> Dual2 {
    let nt = vars.len();
    let t0: Vec<f64> = vars.iter().map(|v| v.re).collect();

    // locate the minimizer of ys -> L(t0, ys) by bisection on the derivative
    let dl = |ys: f64| -> f64 {
        let mut w: Vec<Dual2> = t0.iter().map(|&v| Dual2::constant(v)).collect();
        w.push(Dual2::new(ys, 1.0, 0.0, 0.0));
        parent.eval_l(&w).e1
    };
    let scale = t0.iter().map(|v| v.abs()).sum::<f64>().sqrt().max(1e-6);
    let (mut lo, mut hi) = (-scale, scale);
    let mut grow = 0;
    while dl(lo) > 0.0 && grow < 60 {
        lo *= 2.0;
        grow += 1;
    }
    let mut grow = 0;
    while dl(hi) < 0.0 && grow < 60 {
        hi *= 2.0;
        grow += 1;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if dl(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * scale.max(1.0) {
            break;
        }
    }
    let ys = 0.5 * (lo + hi);

    // full derivative data of L at (t0, ys)
    let mut full_vars = t0.clone();
    full_vars.push(ys);
    let (l0, grad, hess) = parent.l_derivatives(&full_vars);
    let lss = hess[(nt, nt)];

    // propagate the dual perturbations through the reduced Hessian
    let mut out = Dual2::constant(l0);
    for p in 0..nt {
        out.e1 += grad[p] * vars[p].e1;
        out.e2 += grad[p] * vars[p].e2;
        out.e12 += grad[p] * vars[p].e12;
    }
    for p in 0..nt {
        for q in 0..nt {
            let mut lpq = hess[(p, q)];
            if lss.abs() > 1e-14 {
                lpq -= hess[(p, nt)] * hess[(q, nt)] / lss;
            }
            out.e12 += lpq * vars[p].e1 * vars[q].e2;
        }
    }
    out
}

fn coords_checked(split: &ReductiveSplit, y: &AlgebraVector) -> Result<DVector<f64>> {
    let c = split.m_coords(y);
    let back = split.from_m_coords(&c);
    let res = split.algebra.norm(&(y - &back));
    if res > M_COMPONENT_TOL * y.norm().max(1.0) {
        return Err(Error::NotInM(res));
    }
    Ok(c)
}
