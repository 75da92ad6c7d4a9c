//! Canonical symbolic expressions.
//!
//! An expression is kept permanently in a normal form: a sorted sum of
//! terms, each term an exact rational coefficient times a sorted monomial
//! in atoms. Atoms are chart coordinates, parameters, or formal function
//! applications. Equality of expressions is structural equality of the
//! normal forms, so all identities in the library reduce to `==`.
//!
//! The expression language is polynomial: division is only defined by
//! nonzero rational constants, and monomial exponents are positive
//! integers.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coord::CoordinateId;
use super::func::FuncApp;
use super::SymError;

/// Global cap on the number of terms an expression may hold. Exceeding it
/// aborts the computation with a panic carrying [`TERM_LIMIT_MSG`]; the CLI
/// catches the unwind and reports a derivation error.
static MAX_TERMS: AtomicUsize = AtomicUsize::new(usize::MAX);

pub const TERM_LIMIT_MSG: &str = "expression term limit exceeded";

/// Set the global expression-size cap (see `JETHAM_MAX_TERMS`).
pub fn set_max_terms(limit: usize) {
    MAX_TERMS.store(limit.max(1), AtomicOrdering::Relaxed);
}

fn check_term_limit(len: usize) {
    if len > MAX_TERMS.load(AtomicOrdering::Relaxed) {
        panic!("{TERM_LIMIT_MSG} ({len} terms)");
    }
}

/// A multiplicative atom: a coordinate/parameter or a formal function
/// application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Coord(CoordinateId),
    Func(FuncApp),
}

impl Atom {
    pub fn as_coord(&self) -> Option<&CoordinateId> {
        match self {
            Atom::Coord(c) => Some(c),
            Atom::Func(_) => None,
        }
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Atom::Coord(a), Atom::Coord(b)) => a.cmp(b),
            (Atom::Coord(_), Atom::Func(_)) => Ordering::Less,
            (Atom::Func(_), Atom::Coord(_)) => Ordering::Greater,
            (Atom::Func(a), Atom::Func(b)) => a.cmp(b),
        }
    }
}

/// Product of atoms with positive integer exponents, sorted by atom.
/// The empty monomial is the constant 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Monomial {
    factors: Vec<(Atom, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn atom(a: Atom) -> Self {
        Monomial {
            factors: vec![(a, 1)],
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.factors
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors: Vec<(Atom, u32)> =
            Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            match self.factors[i].0.cmp(&other.factors[j].0) {
                Ordering::Less => {
                    factors.push(self.factors[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    factors.push(other.factors[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    factors.push((
                        self.factors[i].0.clone(),
                        self.factors[i].1 + other.factors[j].1,
                    ));
                    i += 1;
                    j += 1;
                }
            }
        }
        factors.extend_from_slice(&self.factors[i..]);
        factors.extend_from_slice(&other.factors[j..]);
        Monomial { factors }
    }

    /// Total degree, counting function applications as degree-1 atoms.
    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }
}

/// Canonical symbolic expression.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Expr {
    // invariant: sorted by monomial, unique monomials, nonzero coefficients
    terms: Vec<(BigRational, Monomial)>,
}

impl Expr {
    pub fn zero() -> Self {
        Expr::default()
    }

    pub fn one() -> Self {
        Expr::from(1)
    }

    pub fn rational(r: BigRational) -> Self {
        if r.is_zero() {
            Expr::zero()
        } else {
            Expr {
                terms: vec![(r, Monomial::one())],
            }
        }
    }

    pub fn int(n: i64) -> Self {
        Expr::rational(BigRational::from(BigInt::from(n)))
    }

    /// Exact fraction n/d. Panics if d == 0.
    pub fn frac(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Expr::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn coord(c: &CoordinateId) -> Self {
        Expr {
            terms: vec![(BigRational::one(), Monomial::atom(Atom::Coord(c.clone())))],
        }
    }

    pub fn atom(a: Atom) -> Self {
        Expr {
            terms: vec![(BigRational::one(), Monomial::atom(a))],
        }
    }

    pub fn terms(&self) -> &[(BigRational, Monomial)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the expression is a bare rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self.terms.as_slice() {
            [] => None,
            [(c, m)] if m.is_one() => Some(c),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || self.as_rational().is_some()
    }

    /// Non-negative integer power.
    pub fn pow(&self, exp: u32) -> Expr {
        match exp {
            0 => Expr::one(),
            1 => self.clone(),
            _ => {
                let mut acc = self.clone();
                for _ in 1..exp {
                    acc = &acc * self;
                }
                acc
            }
        }
    }

    /// Division, defined only when `rhs` is a nonzero rational constant.
    pub fn checked_div(&self, rhs: &Expr) -> Result<Expr, SymError> {
        match rhs.as_rational() {
            Some(r) if !r.is_zero() => Ok(self.scale(&r.recip())),
            Some(_) => Err(SymError::DivisionByZero),
            None => {
                if rhs.is_zero() {
                    Err(SymError::DivisionByZero)
                } else {
                    Err(SymError::DivisionByNonConstant)
                }
            }
        }
    }

    pub fn scale(&self, r: &BigRational) -> Expr {
        if r.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self.terms.iter().map(|(c, m)| (c * r, m.clone())).collect(),
        }
    }

    /// All coordinates the expression depends on, including through the
    /// arguments of function applications.
    pub fn support(&self) -> BTreeSet<CoordinateId> {
        let mut out = BTreeSet::new();
        self.collect_support(&mut out);
        out
    }

    pub(crate) fn collect_support(&self, out: &mut BTreeSet<CoordinateId>) {
        for (_, m) in &self.terms {
            for (a, _) in m.factors() {
                match a {
                    Atom::Coord(c) => {
                        out.insert(c.clone());
                    }
                    Atom::Func(f) => {
                        for arg in f.args() {
                            arg.collect_support(out);
                        }
                    }
                }
            }
        }
    }

    pub fn mentions(&self, c: &CoordinateId) -> bool {
        self.support().contains(c)
    }

    /// Highest power of `c` appearing as a direct monomial factor.
    /// Occurrences inside function arguments are not counted.
    pub fn degree_in(&self, c: &CoordinateId) -> u32 {
        self.terms
            .iter()
            .map(|(_, m)| {
                m.factors()
                    .iter()
                    .filter_map(|(a, e)| match a {
                        Atom::Coord(d) if d == c => Some(*e),
                        _ => None,
                    })
                    .sum::<u32>()
            })
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of the first term in canonical order, used for monic
    /// normalization of equation residuals.
    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.terms.first().map(|(c, _)| c)
    }

    /// Rescale so the leading coefficient is +1 (zero stays zero).
    pub fn monic(&self) -> Expr {
        match self.leading_coefficient() {
            Some(c) => self.scale(&c.recip()),
            None => Expr::zero(),
        }
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<&CoordinateId> for Expr {
    fn from(c: &CoordinateId) -> Self {
        Expr::coord(c)
    }
}

pub(crate) fn normalize(mut terms: Vec<(BigRational, Monomial)>) -> Expr {
    terms.sort_by(|a, b| a.1.cmp(&b.1));
    let mut out: Vec<(BigRational, Monomial)> = Vec::with_capacity(terms.len());
    for (c, m) in terms {
        if c.is_zero() {
            continue;
        }
        match out.last_mut() {
            Some((lc, lm)) if *lm == m => {
                *lc += c;
                if lc.is_zero() {
                    out.pop();
                }
            }
            _ => out.push((c, m)),
        }
    }
    check_term_limit(out.len());
    Expr { terms: out }
}

impl Add for &Expr {
    type Output = Expr;

    fn add(self, rhs: &Expr) -> Expr {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        normalize(terms)
    }
}

impl Sub for &Expr {
    type Output = Expr;

    fn sub(self, rhs: &Expr) -> Expr {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().map(|(c, m)| (-c, m.clone())));
        normalize(terms)
    }
}

impl Mul for &Expr {
    type Output = Expr;

    fn mul(self, rhs: &Expr) -> Expr {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ca, ma) in &self.terms {
            for (cb, mb) in &rhs.terms {
                terms.push((ca * cb, ma.mul(mb)));
            }
        }
        normalize(terms)
    }
}

impl Neg for &Expr {
    type Output = Expr;

    fn neg(self) -> Expr {
        Expr {
            terms: self.terms.iter().map(|(c, m)| (-c, m.clone())).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $trait::$method(&self, &rhs)
            }
        }
        impl $trait<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $trait::$method(&self, rhs)
            }
        }
        impl $trait<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $trait::$method(self, &rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        let mut terms = Vec::new();
        for e in iter {
            terms.extend(e.terms);
        }
        normalize(terms)
    }
}

/// Pretty-printer for rational coefficients without the `1 *` noise.
pub(crate) fn fmt_coeff(
    f: &mut fmt::Formatter<'_>,
    c: &BigRational,
    has_factors: bool,
    leading: bool,
) -> fmt::Result {
    let abs = c.abs();
    if leading {
        if c.is_negative() {
            write!(f, "-")?;
        }
    } else if c.is_negative() {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    if !has_factors {
        write!(f, "{abs}")?;
    } else if !abs.is_one() {
        write!(f, "{abs}*")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (c, m)) in self.terms.iter().enumerate() {
            fmt_coeff(f, c, !m.is_one(), idx == 0)?;
            for (fidx, (a, e)) in m.factors().iter().enumerate() {
                if fidx > 0 {
                    write!(f, "*")?;
                }
                match a {
                    Atom::Coord(cid) => write!(f, "{cid}")?,
                    Atom::Func(func) => write!(f, "{func}")?,
                }
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Substitution bindings, checked for acyclicity before use.
pub type Bindings = BTreeMap<CoordinateId, Expr>;
