//! Polynomials and their largest real roots.
//!
//! [`Polynomial`] holds `f64` coefficients in ascending degree. Real roots are
//! isolated by recursing on the derivative: between consecutive critical
//! points (and out to the Cauchy bound) the polynomial is monotone, so every
//! sign change brackets exactly one root and plain bisection finishes it.
//!
//! [`ClosedForm`] is the registry of characteristic polynomials of the named
//! families and of the difference polynomials used to order their spectral
//! radii. Coefficients are built in exact integer arithmetic (numerators over
//! a common denominator of 2) before conversion.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families;
use crate::graph::Graph;

/// Absolute accuracy of [`Polynomial::largest_real_root`].
pub const ROOT_TOL: f64 = 1e-12;

/// Real polynomial, coefficients in ascending degree, leading coefficient non-zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl TryFrom<Vec<f64>> for Polynomial {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Polynomial> {
        Polynomial::new(v)
    }
}

impl From<Polynomial> for Vec<f64> {
    fn from(p: Polynomial) -> Vec<f64> {
        p.coeffs
    }
}

impl Polynomial {
    /// Builds from ascending coefficients; trailing zeros are dropped.
    pub fn new(mut coeffs: Vec<f64>) -> Result<Polynomial> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameters("non-finite coefficient".into()));
        }
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidParameters("zero polynomial".into()));
        }
        Ok(Polynomial { coeffs })
    }

    /// Builds from coefficients listed from the leading term down.
    pub fn from_descending(coeffs: &[f64]) -> Result<Polynomial> {
        Polynomial::new(coeffs.iter().rev().copied().collect())
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().expect("non-empty")
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Option<Polynomial> {
        if self.degree() == 0 {
            return None;
        }
        let d = self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect();
        Polynomial::new(d).ok()
    }

    /// `1 + max |aᵢ / a_d|`; every root has smaller absolute value.
    pub fn cauchy_bound(&self) -> f64 {
        let lead = self.leading().abs();
        1.0 + self.coeffs[..self.degree()].iter().map(|c| c.abs() / lead).fold(0.0, f64::max)
    }

    fn monic(&self) -> Polynomial {
        let lead = self.leading();
        Polynomial { coeffs: self.coeffs.iter().map(|c| c / lead).collect() }
    }

    /// All distinct real roots in increasing order.
    pub fn real_roots(&self) -> Vec<f64> {
        let p = self.monic();
        match p.degree() {
            0 => return Vec::new(),
            1 => return vec![-p.coeffs[0]],
            _ => {}
        }
        let crit = p.derivative().map(|d| d.real_roots()).unwrap_or_default();
        let bound = p.cauchy_bound();
        let mut knots = Vec::with_capacity(crit.len() + 2);
        knots.push(-bound);
        knots.extend(crit.iter().copied().filter(|c| c.abs() < bound));
        knots.push(bound);

        let mut roots: Vec<f64> = Vec::new();
        let push = |r: f64, roots: &mut Vec<f64>| {
            if roots.last().is_none_or(|&l| (r - l).abs() > ROOT_TOL) {
                roots.push(r);
            }
        };
        for w in knots.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let (flo, fhi) = (p.eval(lo), p.eval(hi));
            if p.is_zero_at(lo) {
                push(lo, &mut roots);
            }
            if flo.signum() * fhi.signum() < 0.0 && !p.is_zero_at(lo) && !p.is_zero_at(hi) {
                push(p.bisect(lo, hi), &mut roots);
            }
        }
        // a knot that is itself a root (tangency) was handled above; the top
        // knot is the Cauchy bound, never a root
        roots
    }

    /// Greatest real root, to absolute accuracy [`ROOT_TOL`].
    pub fn largest_real_root(&self) -> Result<f64> {
        if self.degree() == 0 {
            return Err(Error::NoRealRoot);
        }
        self.real_roots().last().copied().ok_or(Error::NoRealRoot)
    }

    /// Treats values within rounding of zero as zero (catches double roots at
    /// critical points).
    fn is_zero_at(&self, x: f64) -> bool {
        let scale: f64 = self.coeffs.iter().enumerate().map(|(i, c)| c.abs() * x.abs().powi(i as i32)).sum();
        self.eval(x).abs() <= 64.0 * f64::EPSILON * scale.max(f64::MIN_POSITIVE)
    }

    fn bisect(&self, mut lo: f64, mut hi: f64) -> f64 {
        let rising = self.eval(hi) > 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 0.25 * ROOT_TOL {
                break;
            }
            let f = self.eval(mid);
            if f == 0.0 {
                return mid;
            }
            if (f > 0.0) == rising {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// `self − other`.
    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        let len = self.coeffs.len().max(other.coeffs.len());
        let c = (0..len).map(|i| self.coeffs.get(i).unwrap_or(&0.0) - other.coeffs.get(i).unwrap_or(&0.0)).collect();
        Polynomial::new(c)
    }

    /// `x · self`.
    pub fn shift_up(&self) -> Polynomial {
        let mut c = vec![0.0];
        c.extend_from_slice(&self.coeffs);
        Polynomial { coeffs: c }
    }
}

fn fmt_coeff(c: f64) -> String {
    if c.fract() == 0.0 && c.abs() < 1e15 {
        format!("{}", c as i64)
    } else {
        format!("{c}")
    }
}

fn write_terms<T: Copy>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[T],
    is_zero: impl Fn(T) -> bool,
    is_neg: impl Fn(T) -> bool,
    abs: impl Fn(T) -> String,
) -> fmt::Result {
    let mut first = true;
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if is_zero(c) {
            continue;
        }
        let neg = is_neg(c);
        let mag = abs(c);
        if first {
            if neg {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        let show_mag = i == 0 || mag != "1";
        if show_mag {
            f.write_str(&mag)?;
        }
        match i {
            0 => {}
            1 => f.write_str("x")?,
            _ => write!(f, "x^{i}")?,
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs, |c| c == 0.0, |c| c < 0.0, |c| fmt_coeff(c.abs()))
    }
}

/// Integer polynomial, ascending degree. Output of exact characteristic
/// polynomial computation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPolynomial {
    coeffs: Vec<i128>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i128>) -> IntPolynomial {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        IntPolynomial { coeffs }
    }

    pub fn from_descending(coeffs: &[i128]) -> IntPolynomial {
        IntPolynomial::new(coeffs.iter().rev().copied().collect())
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn to_polynomial(&self) -> Result<Polynomial> {
        Polynomial::new(self.coeffs.iter().map(|&c| c as f64).collect())
    }

    pub fn eval(&self, x: i128) -> Option<i128> {
        self.coeffs.iter().rev().try_fold(0i128, |acc, &c| acc.checked_mul(x)?.checked_add(c))
    }

    pub fn neg(&self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &IntPolynomial) -> Result<IntPolynomial> {
        let mut out = vec![0i128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                let t = a.checked_mul(b).ok_or(Error::Overflow)?;
                out[i + j] = out[i + j].checked_add(t).ok_or(Error::Overflow)?;
            }
        }
        Ok(IntPolynomial::new(out))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs, |c| c == 0, |c| c < 0, |c| c.unsigned_abs().to_string())
    }
}

/// Closed-form polynomials whose largest roots are the spectral radii of the
/// named families, plus the difference polynomials that order them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum ClosedForm {
    /// Star of order `n` with `k` disjoint leaf edges: `x³ − x² − (n−1)x + n − 1 − 2k`.
    StarMatching { n: usize, k: usize },
    /// `K_k ▽ K̄_{n−k}`: `x² − (k−1)x − k(n−k)`.
    SplitStar { n: usize, k: usize },
    /// Star with one leaf edge, size `m`: `x³ − x² − (m−1)x + m − 3`.
    StarPlusEdge { m: usize },
    /// Star of order `m − 1` with two leaf edges: `x³ − x² − (m−2)x + m − 6`.
    StarPlusTwoEdges { m: usize },
    /// Double star `D_{m−2,1}`: `x⁴ − mx² + m − 2`.
    DoubleStar { m: usize },
    /// `DoubleStar − x · StarPlusEdge = x³ − x² − (m−3)x + m − 2`.
    DoubleStarGap { m: usize },
    /// Hub with a 3-path among its leaves: `x⁴ − mx² − 4x + 2m − 10`.
    StarWithPath { m: usize },
    /// `StarWithPath − x · StarPlusEdge = x³ − x² − (m+1)x + 2m − 10`.
    StarWithPathGap { m: usize },
    /// Pendant split star of size `m` with `t` pendants:
    /// `x⁴ − mx² − (m−t−1)x + t(m−t−1)/2`.
    PendantSplitStar { m: usize, t: usize },
    /// The `t = 1` member: `x⁴ − mx² − (m−2)x + (m−2)/2`.
    PendantSplitStarOne { m: usize },
    /// `PendantSplitStar(m, t) − PendantSplitStarOne(m) = (t−1)(x + (m−t−2)/2)`.
    PendantGap { m: usize, t: usize },
}

impl ClosedForm {
    /// Exact coefficients (ascending) over the returned denominator.
    pub fn exact(&self) -> Result<(Vec<i128>, i128)> {
        self.validate()?;
        let c = |v: usize| v as i128;
        let out = match *self {
            ClosedForm::StarMatching { n, k } => (vec![c(n) - 1 - 2 * c(k), -(c(n) - 1), -1, 1], 1),
            ClosedForm::SplitStar { n, k } => (vec![-(c(k) * (c(n) - c(k))), -(c(k) - 1), 1], 1),
            ClosedForm::StarPlusEdge { m } => (vec![c(m) - 3, -(c(m) - 1), -1, 1], 1),
            ClosedForm::StarPlusTwoEdges { m } => (vec![c(m) - 6, -(c(m) - 2), -1, 1], 1),
            ClosedForm::DoubleStar { m } => (vec![c(m) - 2, 0, -c(m), 0, 1], 1),
            ClosedForm::DoubleStarGap { m } => (vec![c(m) - 2, -(c(m) - 3), -1, 1], 1),
            ClosedForm::StarWithPath { m } => (vec![2 * c(m) - 10, -4, -c(m), 0, 1], 1),
            ClosedForm::StarWithPathGap { m } => (vec![2 * c(m) - 10, -(c(m) + 1), -1, 1], 1),
            ClosedForm::PendantSplitStar { m, t } => {
                let a = c(m) - c(t) - 1;
                (vec![c(t) * a, -2 * a, -2 * c(m), 0, 2], 2)
            }
            ClosedForm::PendantSplitStarOne { m } => (vec![c(m) - 2, -2 * (c(m) - 2), -2 * c(m), 0, 2], 2),
            ClosedForm::PendantGap { m, t } => ((vec![(c(t) - 1) * (c(m) - c(t) - 2), 2 * (c(t) - 1)]), 2),
        };
        Ok(out)
    }

    /// The exact polynomial when every coefficient is an integer.
    pub fn exact_int(&self) -> Result<Option<IntPolynomial>> {
        let (num, den) = self.exact()?;
        if num.iter().all(|c| c % den == 0) {
            Ok(Some(IntPolynomial::new(num.iter().map(|c| c / den).collect())))
        } else {
            Ok(None)
        }
    }

    pub fn polynomial(&self) -> Result<Polynomial> {
        let (num, den) = self.exact()?;
        Polynomial::new(num.iter().map(|&c| c as f64 / den as f64).collect())
    }

    pub fn largest_real_root(&self) -> Result<f64> {
        self.polynomial()?.largest_real_root()
    }

    /// The graph whose spectral radius is this form's largest root, if any.
    pub fn graph(&self) -> Result<Option<Graph>> {
        self.validate()?;
        let g = match *self {
            ClosedForm::StarMatching { n, k } => Some(families::star_matching(n, k)?),
            ClosedForm::SplitStar { n, k } => Some(families::split_star(n, k)?),
            ClosedForm::StarPlusEdge { m } => Some(families::star_matching(m, 1)?),
            ClosedForm::StarPlusTwoEdges { m } => Some(families::star_matching(m - 1, 2)?),
            ClosedForm::DoubleStar { m } => Some(families::double_star(m - 2, 1)?),
            ClosedForm::StarWithPath { m } => Some(families::star_with_path(m)?),
            ClosedForm::PendantSplitStar { m, t } => Some(families::pendant_split_star(m, t)?),
            ClosedForm::PendantSplitStarOne { m } => Some(families::pendant_split_star(m, 1)?),
            ClosedForm::DoubleStarGap { .. } | ClosedForm::StarWithPathGap { .. } | ClosedForm::PendantGap { .. } => {
                None
            }
        };
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameters(msg));
        match *self {
            ClosedForm::StarMatching { n, k } if n < 2 || n < 2 * k + 1 => {
                bad(format!("star-matching needs n >= 2k+1, n >= 2; got n={n}, k={k}"))
            }
            ClosedForm::SplitStar { n, k } if k == 0 || k > n => {
                bad(format!("split-star needs 1 <= k <= n; got n={n}, k={k}"))
            }
            ClosedForm::StarPlusEdge { m } | ClosedForm::DoubleStar { m } | ClosedForm::DoubleStarGap { m }
                if m < 3 =>
            {
                bad(format!("needs m >= 3; got {m}"))
            }
            ClosedForm::StarPlusTwoEdges { m } | ClosedForm::StarWithPath { m } | ClosedForm::StarWithPathGap { m }
                if m < 6 =>
            {
                bad(format!("needs m >= 6; got {m}"))
            }
            ClosedForm::PendantSplitStar { m, t } => families::pendant_split_star_r(m, t).map(|_| ()),
            ClosedForm::PendantSplitStarOne { m } => families::pendant_split_star_r(m, 1).map(|_| ()),
            ClosedForm::PendantGap { m, t } if t < 2 || m < t + 2 => {
                bad(format!("pendant-gap needs t >= 2 and m >= t + 2; got m={m}, t={t}"))
            }
            _ => Ok(()),
        }
    }
}

/// Names accepted on the command line, with the parameters each one reads.
pub const CLOSED_FORM_NAMES: &[(&str, &str)] = &[
    ("star-matching", "n k"),
    ("split-star", "n k"),
    ("star-plus-edge", "m"),
    ("star-plus-two-edges", "m"),
    ("double-star", "m"),
    ("double-star-gap", "m"),
    ("star-with-path", "m"),
    ("star-with-path-gap", "m"),
    ("pendant-split-star", "m t"),
    ("pendant-split-star-one", "m"),
    ("pendant-gap", "m t"),
];

/// Parameters for building a [`ClosedForm`] by name.
#[derive(Clone, Copy, Debug, Default)]
pub struct FormParams {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub t: Option<usize>,
}

impl ClosedForm {
    pub fn from_name(name: &str, p: FormParams) -> Result<ClosedForm> {
        let need =
            |v: Option<usize>, what: &str| v.ok_or_else(|| Error::InvalidParameters(format!("{name} needs --{what}")));
        let form = match name {
            "star-matching" => ClosedForm::StarMatching { n: need(p.n, "n")?, k: need(p.k, "k")? },
            "split-star" => ClosedForm::SplitStar { n: need(p.n, "n")?, k: need(p.k, "k")? },
            "star-plus-edge" => ClosedForm::StarPlusEdge { m: need(p.m, "m")? },
            "star-plus-two-edges" => ClosedForm::StarPlusTwoEdges { m: need(p.m, "m")? },
            "double-star" => ClosedForm::DoubleStar { m: need(p.m, "m")? },
            "double-star-gap" => ClosedForm::DoubleStarGap { m: need(p.m, "m")? },
            "star-with-path" => ClosedForm::StarWithPath { m: need(p.m, "m")? },
            "star-with-path-gap" => ClosedForm::StarWithPathGap { m: need(p.m, "m")? },
            "pendant-split-star" => ClosedForm::PendantSplitStar { m: need(p.m, "m")?, t: need(p.t, "t")? },
            "pendant-split-star-one" => ClosedForm::PendantSplitStarOne { m: need(p.m, "m")? },
            "pendant-gap" => ClosedForm::PendantGap { m: need(p.m, "m")?, t: need(p.t, "t")? },
            other => return Err(Error::InvalidParameters(format!("unknown polynomial `{other}`"))),
        };
        form.validate()?;
        Ok(form)
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    /// Comma-separated coefficients from the leading term down, e.g. `1,-1,-2`.
    fn from_str(s: &str) -> Result<Polynomial> {
        let coeffs: std::result::Result<Vec<f64>, _> = s.split(',').map(|c| c.trim().parse::<f64>()).collect();
        let coeffs = coeffs.map_err(|e| Error::InvalidParameters(format!("bad coefficient list `{s}`: {e}")))?;
        Polynomial::from_descending(&coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn eval_horner() {
        let p = Polynomial::from_descending(&[1.0, -1.0, -8.0, 6.0]).unwrap();
        assert_eq!(p.eval(0.0), 6.0);
        assert_eq!(p.eval(1.0), -2.0);
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn simple_roots() {
        let p = Polynomial::from_descending(&[1.0, -1.0, -2.0]).unwrap();
        assert!(close(p.largest_real_root().unwrap(), 2.0, 1e-12));
        assert_eq!(p.real_roots().len(), 2);
        // x² − x − 8 at m = 9 gives (1 + √33)/2
        let p = Polynomial::from_descending(&[1.0, -1.0, -8.0]).unwrap();
        assert!(close(p.largest_real_root().unwrap(), (1.0 + 33f64.sqrt()) / 2.0, 1e-12));
    }

    #[test]
    fn double_and_missing_roots() {
        // (x−1)²(x+1)
        let p = Polynomial::from_descending(&[1.0, -1.0, -1.0, 1.0]).unwrap();
        assert!(close(p.largest_real_root().unwrap(), 1.0, 1e-9));
        // (x−2)²
        let p = Polynomial::from_descending(&[1.0, -4.0, 4.0]).unwrap();
        assert!(close(p.largest_real_root().unwrap(), 2.0, 1e-9));
        let p = Polynomial::from_descending(&[1.0, 0.0, 1.0]).unwrap();
        assert_eq!(p.largest_real_root(), Err(Error::NoRealRoot));
        assert_eq!(Polynomial::new(vec![3.0]).unwrap().largest_real_root(), Err(Error::NoRealRoot));
        assert!(Polynomial::new(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn negative_leading_coefficient() {
        // −(x − 3)(x + 1)
        let p = Polynomial::from_descending(&[-1.0, 2.0, 3.0]).unwrap();
        assert!(close(p.largest_real_root().unwrap(), 3.0, 1e-12));
    }

    #[test]
    fn registry_examples() {
        let f = ClosedForm::StarPlusEdge { m: 22 }.polynomial().unwrap();
        assert_eq!(f, Polynomial::from_descending(&[1.0, -1.0, -21.0, 19.0]).unwrap());
        let f3 = ClosedForm::PendantSplitStar { m: 23, t: 2 }.polynomial().unwrap();
        assert_eq!(f3, Polynomial::from_descending(&[1.0, 0.0, -23.0, -20.0, 20.0]).unwrap());
        assert_eq!(f3.to_string(), "x^4 - 23x^2 - 20x + 20");
        for m in 3..200 {
            let h = ClosedForm::DoubleStarGap { m }.polynomial().unwrap();
            let s = ((m - 1) as f64).sqrt();
            assert!(close(h.eval(s), 2.0 * s - 1.0, 1e-9 * m as f64));
        }
        let f4 = ClosedForm::PendantSplitStarOne { m: 22 }.exact().unwrap();
        assert_eq!(f4, (vec![20, -40, -44, 0, 2], 2));
        assert!(ClosedForm::PendantSplitStar { m: 22, t: 2 }.polynomial().is_err());
        assert!(ClosedForm::PendantGap { m: 22, t: 1 }.polynomial().is_err());
    }

    #[test]
    fn difference_identities() {
        for m in (18..58).step_by(2) {
            let f = ClosedForm::StarPlusEdge { m }.polynomial().unwrap();
            let g = ClosedForm::DoubleStar { m }.polynomial().unwrap();
            let h = ClosedForm::DoubleStarGap { m }.polynomial().unwrap();
            assert_eq!(g.sub(&f.shift_up()).unwrap(), h);
            let f2 = ClosedForm::StarWithPath { m }.polynomial().unwrap();
            let h1 = ClosedForm::StarWithPathGap { m }.polynomial().unwrap();
            assert_eq!(f2.sub(&f.shift_up()).unwrap(), h1);
        }
        // the pendant gap is the difference at equal m, whatever the parity
        for m in 22..42 {
            for t in 2..m - 2 {
                let Ok((n3, _)) = (ClosedForm::PendantSplitStar { m, t }).exact() else {
                    continue;
                };
                let a1 = m as i128 - 2;
                let one = [a1, -2 * a1, -2 * m as i128, 0, 2];
                let diff: Vec<i128> = n3.iter().zip(one).map(|(a, b)| a - b).collect();
                let (gap, _) = ClosedForm::PendantGap { m, t }.exact().unwrap();
                assert_eq!(&diff[..2], &gap[..]);
                assert!(diff[2..].iter().all(|&c| c == 0));
            }
        }
    }

    #[test]
    fn int_polynomial_ops() {
        let p = IntPolynomial::from_descending(&[1, 0, -23, -20, 20]);
        assert_eq!(p.to_string(), "x^4 - 23x^2 - 20x + 20");
        let x = IntPolynomial::new(vec![0, 1]);
        assert_eq!(p.mul(&x).unwrap().degree(), 5);
        assert_eq!(p.neg().coeffs()[4], -1);
        assert_eq!(p.eval(1), Some(1 - 23 - 20 + 20));
        assert_eq!(IntPolynomial::new(vec![]).to_string(), "0");
    }

    #[test]
    fn parsing_and_serde() {
        let p: Polynomial = "1, -1, -2".parse().unwrap();
        assert!(close(p.largest_real_root().unwrap(), 2.0, 1e-12));
        assert_eq!(serde_json::to_string(&p).unwrap(), "[-2.0,-1.0,1.0]");
        let back: Polynomial = serde_json::from_str("[-2.0,-1.0,1.0]").unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<Polynomial>("[0.0]").is_err());
        let form =
            ClosedForm::from_name("pendant-split-star", FormParams { m: Some(23), t: Some(2), ..Default::default() })
                .unwrap();
        assert_eq!(form, ClosedForm::PendantSplitStar { m: 23, t: 2 });
        assert!(ClosedForm::from_name("pendant-split-star", FormParams { m: Some(23), ..Default::default() }).is_err());
        assert!(ClosedForm::from_name("nope", FormParams::default()).is_err());
        for (name, _) in CLOSED_FORM_NAMES {
            let p = FormParams { n: Some(9), k: Some(2), m: Some(23), t: Some(2) };
            assert!(ClosedForm::from_name(name, p).is_ok() || *name == "pendant-split-star-one", "{name}");
        }
    }

    proptest! {
        #[test]
        fn root_of_product_of_linear_factors(roots in proptest::collection::vec(-50.0f64..50.0, 1..5)) {
            let mut c = vec![1.0];
            for r in &roots {
                let mut next = vec![0.0; c.len() + 1];
                for (i, a) in c.iter().enumerate() {
                    next[i + 1] += a;
                    next[i] -= a * r;
                }
                c = next;
            }
            let p = Polynomial::new(c).unwrap();
            let top = roots.iter().copied().fold(f64::MIN, f64::max);
            let got = p.largest_real_root().unwrap();
            // clustered roots lose accuracy; the residual stays tiny
            prop_assert!((got - top).abs() < 1e-4 || p.eval(got).abs() < 1e-6);
        }

        #[test]
        fn root_residual_small(a in -30i32..30, b in -30i32..30, c in -30i32..30) {
            let p = Polynomial::from_descending(&[1.0, a as f64, b as f64, c as f64]).unwrap();
            let r = p.largest_real_root().unwrap();
            let scale = 1.0 + r.abs().powi(3);
            prop_assert!(p.eval(r).abs() < 1e-9 * scale);
            prop_assert!(p.eval(r + 1e-6) > 0.0 || p.eval(r + 1e-6).abs() < 1e-9 * scale);
        }
    }
}
