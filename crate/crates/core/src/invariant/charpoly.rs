use std::fmt;

use crate::graph::Graph;

use super::InvariantError;

/// Largest graph accepted by [`char_poly`].
pub const CHAR_POLY_MAX_VERTICES: usize = 16;

/// Coefficients of `det(xI - A)`, highest power first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharPoly {
    coeffs: Vec<i128>,
}

impl CharPoly {
    /// `coeffs()[k]` multiplies `x^(n-k)`.
    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Exact evaluation; `None` on overflow.
    pub fn eval(&self, x: i128) -> Option<i128> {
        self.coeffs
            .iter()
            .try_fold(0i128, |acc, &c| acc.checked_mul(x)?.checked_add(c))
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let power = n - k;
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.unsigned_abs();
            if mag != 1 || power == 0 {
                write!(f, "{mag}")?;
            }
            match power {
                0 => {}
                1 => f.write_str("x")?,
                p => write!(f, "x^{p}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Characteristic polynomial of the adjacency matrix by the
/// Faddeev–LeVerrier recurrence in checked 128-bit integers:
///
/// `M_k = A·M_{k-1} + c_{k-1}·I`, `c_k = -tr(A·M_k) / k`, with `c_0 = 1`.
///
/// Each division is exact over the integers; a nonzero remainder or any
/// overflow is reported instead of being silently wrapped.
pub fn char_poly(g: &Graph) -> Result<CharPoly, InvariantError> {
    let n = g.vertex_count();
    if n > CHAR_POLY_MAX_VERTICES {
        return Err(InvariantError::TooManyVertices {
            n,
            cap: CHAR_POLY_MAX_VERTICES,
        });
    }
    let overflow = || InvariantError::Overflow(n);
    let rows = g.adjacency_rows();

    let mut coeffs = vec![1i128];
    let mut m = vec![vec![0i128; n]; n];
    for k in 1..=n {
        // m <- A·m + c_{k-1} I, then am = A·m
        let mut next = a_times(rows, &m).ok_or_else(overflow)?;
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = row[i].checked_add(coeffs[k - 1]).ok_or_else(overflow)?;
        }
        m = next;
        let am = a_times(rows, &m).ok_or_else(overflow)?;
        let trace = (0..n)
            .try_fold(0i128, |acc, i| acc.checked_add(am[i][i]))
            .ok_or_else(overflow)?;
        let k = k as i128;
        if trace % k != 0 {
            return Err(InvariantError::InexactDivision);
        }
        coeffs.push((trace / k).checked_neg().ok_or_else(overflow)?);
    }
    Ok(CharPoly { coeffs })
}

fn a_times(rows: &[u32], m: &[Vec<i128>]) -> Option<Vec<Vec<i128>>> {
    let n = rows.len();
    let mut out = vec![vec![0i128; n]; n];
    for (i, &row) in rows.iter().enumerate() {
        let mut rest = row;
        while rest != 0 {
            let l = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            for j in 0..n {
                out[i][j] = out[i][j].checked_add(m[l][j])?;
            }
        }
    }
    Some(out)
}
