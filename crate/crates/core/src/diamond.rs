//! Binary operations on the algebraic closure that commute with Frobenius:
//! addition, multiplication, and evaluation of a bivariate polynomial with
//! coefficients in the base field.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};
use crate::poly::Poly;
use crate::text;

/// `φ(x, y) = Σ_i ψ_i(x) y^i` with `ψ_i(x) = Σ_j a_ij x^j`.
///
/// Stored as a rectangular matrix `rows[i][j] = a_ij`, trimmed so the last
/// row and the last column each hold a nonzero entry.
#[derive(Clone, PartialEq, Eq)]
pub struct BivarPoly {
    ctx: FieldCtx,
    rows: Vec<Vec<FieldElem>>,
}

impl BivarPoly {
    pub fn new(ctx: &FieldCtx, mut rows: Vec<Vec<FieldElem>>) -> BivarPoly {
        let width = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        for r in rows.iter_mut() {
            r.resize(width, ctx.zero());
        }
        while rows.last().is_some_and(|r| r.iter().all(|c| c.is_zero())) {
            rows.pop();
        }
        let mut width = rows.first().map_or(0, |r| r.len());
        while width > 0 && rows.iter().all(|r| r[width - 1].is_zero()) {
            width -= 1;
        }
        for r in rows.iter_mut() {
            r.truncate(width);
        }
        BivarPoly {
            ctx: ctx.clone(),
            rows,
        }
    }

    /// `x + y`.
    pub fn sum(ctx: &FieldCtx) -> BivarPoly {
        BivarPoly::new(ctx, vec![vec![ctx.zero(), ctx.one()], vec![ctx.one()]])
    }

    /// `x * y`.
    pub fn product(ctx: &FieldCtx) -> BivarPoly {
        BivarPoly::new(ctx, vec![vec![], vec![ctx.zero(), ctx.one()]])
    }

    /// `ψ(x) * y`.
    pub fn times_y(psi: &Poly) -> BivarPoly {
        BivarPoly::new(psi.ctx(), vec![vec![], psi.coeffs().to_vec()])
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn deg_x(&self) -> Option<usize> {
        self.rows.first().map(|r| r.len() - 1)
    }

    pub fn deg_y(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize, j: usize) -> FieldElem {
        self.rows
            .get(i)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_else(|| self.ctx.zero())
    }

    /// `ψ_i`, the coefficient of `y^i` as a polynomial in `x`.
    pub fn psi(&self, i: usize) -> Poly {
        Poly::new(&self.ctx, self.rows.get(i).cloned().unwrap_or_default())
    }

    /// `φ(a, b)` for `a`, `b` in a common extension of the coefficient field.
    pub fn eval(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        if a.ctx() != b.ctx() {
            return Err(Error::CtxMismatch);
        }
        let mut acc = a.ctx().zero();
        for i in (0..self.rows.len()).rev() {
            acc = &(&acc * b) + &self.psi(i).eval(a)?;
        }
        Ok(acc)
    }

    pub fn parse(text: &str, ctx: &FieldCtx) -> Result<BivarPoly> {
        let mut rows: Vec<Vec<FieldElem>> = Vec::new();
        for t in text::parse_terms(text, ctx, true)? {
            if rows.len() <= t.ypow {
                rows.resize(t.ypow + 1, Vec::new());
            }
            let row = &mut rows[t.ypow];
            if row.len() <= t.xpow {
                row.resize(t.xpow + 1, ctx.zero());
            }
            row[t.xpow] = &row[t.xpow] + &t.coeff;
        }
        Ok(BivarPoly::new(ctx, rows))
    }
}

/// Canonical text: terms `c*x^j*y^i` sorted by `(i, j)` descending.
impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, row) in self.rows.iter().enumerate().rev() {
            for (j, c) in row.iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, "+")?;
                }
                first = false;
                write!(f, "{}", text::format_monomial(c, &[('x', j), ('y', i)]))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub enum DiamondOp {
    Add,
    Mul,
    Bivar(BivarPoly),
}

impl DiamondOp {
    /// `add`, `mul`, or `phi=<bivariate polynomial>`.
    pub fn parse(text: &str, ctx: &FieldCtx) -> Result<DiamondOp> {
        let t = text.trim();
        match t {
            "add" => Ok(DiamondOp::Add),
            "mul" => Ok(DiamondOp::Mul),
            _ => match t.strip_prefix("phi=") {
                Some(rest) => Ok(DiamondOp::Bivar(BivarPoly::parse(rest, ctx)?)),
                None => Err(Error::Syntax {
                    pos: 0,
                    msg: format!("expected `add`, `mul` or `phi=...`, got `{t}`"),
                }),
            },
        }
    }

    pub fn eval(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        if a.ctx() != b.ctx() {
            return Err(Error::CtxMismatch);
        }
        match self {
            DiamondOp::Add => Ok(a + b),
            DiamondOp::Mul => Ok(a * b),
            DiamondOp::Bivar(phi) => phi.eval(a, b),
        }
    }

    /// The bivariate polynomial realizing this operation over `ctx`.
    pub fn to_bivar(&self, ctx: &FieldCtx) -> BivarPoly {
        match self {
            DiamondOp::Add => BivarPoly::sum(ctx),
            DiamondOp::Mul => BivarPoly::product(ctx),
            DiamondOp::Bivar(phi) => phi.clone(),
        }
    }

    /// Checks that coefficients (if any) live in `ctx`.
    pub(crate) fn check_base(&self, ctx: &FieldCtx) -> Result<()> {
        match self {
            DiamondOp::Bivar(phi) if phi.ctx() != ctx => Err(Error::CtxMismatch),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for DiamondOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiamondOp::Add => write!(f, "add"),
            DiamondOp::Mul => write!(f, "mul"),
            DiamondOp::Bivar(phi) => write!(f, "phi={phi}"),
        }
    }
}

impl fmt::Debug for DiamondOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `a ⋄ b`.
pub fn eval_diamond(d: &DiamondOp, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
    d.eval(a, b)
}
