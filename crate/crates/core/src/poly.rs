//! Dense polynomials with exact integer coefficients.

use std::fmt;

use num_rational::Ratio;

pub type Rational = Ratio<i128>;

/// Polynomial with `i128` coefficients, lowest degree first. Trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<i128>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    /// Coefficients given from the leading term down to the constant.
    pub fn from_descending(coeffs: &[i128]) -> Self {
        IntPoly::new(coeffs.iter().rev().copied().collect())
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    /// Leading term first.
    pub fn descending(&self) -> Vec<i128> {
        self.coeffs.iter().rev().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> i128 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * x + c as f64)
    }

    pub fn eval_exact(&self, x: Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::from_integer(0), |acc, &c| {
                acc * x + Rational::from_integer(c)
            })
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as i128)
                .collect(),
        )
    }

    /// Sum of absolute coefficient values.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|&c| (c as f64).abs()).sum()
    }

    /// Division with remainder over the rationals. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &IntPoly) -> (Vec<Rational>, Vec<Rational>) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let d = divisor.coeffs.len() - 1;
        let lead = Rational::from_integer(divisor.leading());
        let mut rem: Vec<Rational> = self
            .coeffs
            .iter()
            .map(|&c| Rational::from_integer(c))
            .collect();
        if rem.len() <= d {
            return (Vec::new(), rem);
        }
        let mut quot = vec![Rational::from_integer(0); rem.len() - d];
        for i in (0..quot.len()).rev() {
            let q = rem[i + d] / lead;
            quot[i] = q;
            for (j, &c) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= q * Rational::from_integer(c);
            }
        }
        rem.truncate(d);
        while rem.last().is_some_and(|r| *r == Rational::from_integer(0)) {
            rem.pop();
        }
        (quot, rem)
    }

    /// True when `divisor` divides `self` exactly over the rationals.
    pub fn is_divisible_by(&self, divisor: &IntPoly) -> bool {
        self.div_rem(divisor).1.is_empty()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.unsigned_abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{a}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{a}x^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// `det(xI - M)` for a square integer matrix, by Berkowitz's division-free recurrence.
///
/// Returns `None` if an intermediate value overflows `i128`.
pub fn berkowitz_char_poly(m: &[Vec<i64>]) -> Option<IntPoly> {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    // descending coefficients of the characteristic polynomial of the leading r x r block
    let mut p: Vec<i128> = vec![1];
    for r in 0..n {
        // column of the Toeplitz factor: 1, -a_rr, -R C, -R M C, ..., -R M^(r-1) C
        let mut col = Vec::with_capacity(r + 2);
        col.push(1i128);
        col.push(-(m[r][r] as i128));
        let mut v: Vec<i128> = (0..r).map(|i| m[i][r] as i128).collect();
        for _ in 0..r {
            let rc = (0..r).try_fold(0i128, |acc, j| {
                acc.checked_add((m[r][j] as i128).checked_mul(v[j])?)
            })?;
            col.push(rc.checked_neg()?);
            let mut next = vec![0i128; r];
            for (i, slot) in next.iter_mut().enumerate() {
                *slot = (0..r).try_fold(0i128, |acc, j| {
                    acc.checked_add((m[i][j] as i128).checked_mul(v[j])?)
                })?;
            }
            v = next;
        }
        let mut np = vec![0i128; r + 2];
        for (i, slot) in np.iter_mut().enumerate() {
            let mut acc = 0i128;
            for (k, &pk) in p.iter().enumerate() {
                if i >= k {
                    acc = acc.checked_add(col[i - k].checked_mul(pk)?)?;
                }
            }
            *slot = acc;
        }
        p = np;
    }
    Some(IntPoly::from_descending(&p))
}
