//! Dense univariate polynomials, determinants, resultants and interpolation
//! over any [`Ring`]. Polynomials are coefficient vectors, low degree first.

use crate::ring::Ring;

pub type Poly<E> = Vec<E>;

pub fn poly_add<R: Ring>(r: &R, a: &[R::E], b: &[R::E]) -> Poly<R::E> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => r.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

pub fn poly_sub<R: Ring>(r: &R, a: &[R::E], b: &[R::E]) -> Poly<R::E> {
    let nb: Vec<R::E> = b.iter().map(|x| r.neg(x)).collect();
    poly_add(r, a, &nb)
}

pub fn poly_mul<R: Ring>(r: &R, a: &[R::E], b: &[R::E]) -> Poly<R::E> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if r.is_exact_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = r.add(&out[i + j], &r.mul(x, y));
        }
    }
    out
}

pub fn poly_scale<R: Ring>(r: &R, a: &[R::E], c: &R::E) -> Poly<R::E> {
    a.iter().map(|x| r.mul(x, c)).collect()
}

pub fn poly_pow<R: Ring>(r: &R, a: &[R::E], n: u32) -> Poly<R::E> {
    let mut acc = vec![r.one()];
    for _ in 0..n {
        acc = poly_mul(r, &acc, a);
    }
    acc
}

pub fn poly_eval<R: Ring>(r: &R, a: &[R::E], x: &R::E) -> R::E {
    let mut acc = r.zero();
    for c in a.iter().rev() {
        acc = r.add(&r.mul(&acc, x), c);
    }
    acc
}

/// Coefficients (in X) of p(y - X) for a fixed scalar y.
pub fn shifted_reflection<R: Ring>(r: &R, p: &[R::E], y: &R::E) -> Poly<R::E> {
    // Horner in the polynomial (y - X).
    let lin = vec![y.clone(), r.neg(&r.one())];
    let mut acc: Poly<R::E> = vec![r.zero()];
    for c in p.iter().rev() {
        acc = poly_mul(r, &acc, &lin);
        acc[0] = r.add(&acc[0], c);
    }
    acc.resize(p.len().max(1), r.zero());
    acc
}

/// Determinant by Gaussian elimination, pivoting on the smallest `pivot_key`.
pub fn det<R: Ring>(r: &R, mut m: Vec<Vec<R::E>>) -> R::E {
    let n = m.len();
    if n == 0 {
        return r.one();
    }
    let mut acc = r.one();
    for col in 0..n {
        let mut best: Option<(usize, i64)> = None;
        for (row, line) in m.iter().enumerate().skip(col) {
            if let Some(k) = r.pivot_key(&line[col]) {
                if best.map_or(true, |(_, bk)| k < bk) {
                    best = Some((row, k));
                }
            }
        }
        let Some((piv, _)) = best else {
            return r.mul(&acc, &zero_column_bound(r, &m[col..], col));
        };
        if piv != col {
            m.swap(piv, col);
            acc = r.neg(&acc);
        }
        let p = m[col][col].clone();
        acc = r.mul(&acc, &p);
        let pinv = r.inv(&p).expect("pivot must be invertible");
        let (top, rest) = m.split_at_mut(col + 1);
        let prow = &top[col];
        for line in rest.iter_mut() {
            if r.is_exact_zero(&line[col]) {
                continue;
            }
            let f = r.mul(&line[col], &pinv);
            for k in col + 1..n {
                if !r.is_exact_zero(&prow[k]) {
                    line[k] = r.sub(&line[k], &r.mul(&f, &prow[k]));
                }
            }
        }
    }
    acc
}

/// Determinant by cofactor expansion along the first row; division-free,
/// so it works over rings without inverses. Exponential: small sizes only.
pub fn det_expand<R: Ring>(r: &R, m: &[Vec<R::E>]) -> R::E {
    let n = m.len();
    if n == 0 {
        return r.one();
    }
    let mut acc = r.zero();
    for (c, a) in m[0].iter().enumerate() {
        if r.is_exact_zero(a) {
            continue;
        }
        let minor: Vec<Vec<R::E>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let t = r.mul(a, &det_expand(r, &minor));
        acc = if c % 2 == 0 { r.add(&acc, &t) } else { r.sub(&acc, &t) };
    }
    acc
}

/// For a block whose first column is zero to precision: an element that is
/// zero to the precision the block's determinant is known to. The
/// determinant is bounded by the product over columns of the largest entry
/// (ultrametric Hadamard bound); over exact rings this is zero.
fn zero_column_bound<R: Ring>(r: &R, rows: &[Vec<R::E>], col: usize) -> R::E {
    let n = rows.first().map_or(0, |x| x.len());
    let mut acc = rows.iter().fold(r.zero(), |s, line| r.add(&s, &line[col]));
    for k in col + 1..n {
        let zeros = rows.iter().filter(|line| r.pivot_key(&line[k]).is_none()).fold(r.zero(), |s, line| r.add(&s, &line[k]));
        let big = rows.iter().filter_map(|line| r.pivot_key(&line[k]).map(|key| (key, &line[k]))).min_by_key(|x| x.0);
        let e = match big {
            Some((_, e)) => r.add(e, &zeros),
            None => zeros,
        };
        acc = r.mul(&acc, &e);
    }
    acc
}

/// Sylvester matrix of f (degree df) and g (degree dg) at the given formal
/// degrees; leading coefficients may vanish.
pub fn sylvester<R: Ring>(r: &R, f: &[R::E], df: usize, g: &[R::E], dg: usize) -> Vec<Vec<R::E>> {
    let n = df + dg;
    let mut m = vec![vec![r.zero(); n]; n];
    let coef = |p: &[R::E], i: usize| p.get(i).cloned().unwrap_or_else(|| r.zero());
    for i in 0..dg {
        for k in 0..=df {
            m[i][i + k] = coef(f, df - k);
        }
    }
    for i in 0..df {
        for k in 0..=dg {
            m[dg + i][i + k] = coef(g, dg - k);
        }
    }
    m
}

/// Resultant at fixed formal degrees.
pub fn resultant<R: Ring>(r: &R, f: &[R::E], df: usize, g: &[R::E], dg: usize) -> R::E {
    if df == 0 && dg == 0 {
        return r.one();
    }
    det(r, sylvester(r, f, df, g, dg))
}

/// Interpolating polynomial through (xs[i], ys[i]) by Newton divided differences.
pub fn interpolate<R: Ring>(r: &R, xs: &[R::E], ys: &[R::E]) -> Poly<R::E> {
    let n = xs.len();
    assert_eq!(n, ys.len());
    let mut dd: Vec<R::E> = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = r.sub(&dd[i], &dd[i - 1]);
            let den = r.sub(&xs[i], &xs[i - level]);
            let inv = r.inv(&den).expect("interpolation nodes must be distinct");
            dd[i] = r.mul(&num, &inv);
        }
    }
    let mut poly: Poly<R::E> = vec![dd[n - 1].clone()];
    for i in (0..n - 1).rev() {
        let lin = vec![r.neg(&xs[i]), r.one()];
        poly = poly_mul(r, &poly, &lin);
        poly[0] = r.add(&poly[0], &dd[i]);
    }
    poly.resize(n, r.zero());
    poly
}

/// Double resultant Res_Y(Res_X(p1(X), p2(Y - X)), p3(Y)) at fixed degrees,
/// with the inner resultant recovered by evaluation and interpolation.
pub fn double_resultant<R: Ring>(
    r: &R,
    p1: &[R::E],
    d1: usize,
    p2: &[R::E],
    d2: usize,
    p3: &[R::E],
    d3: usize,
) -> R::E {
    let inner = inner_resultant(r, p1, d1, p2, d2);
    resultant(r, &inner, d1 * d2, p3, d3)
}

/// R(Y) = Res_X(p1(X), p2(Y - X)) as a polynomial of formal degree d1*d2.
pub fn inner_resultant<R: Ring>(r: &R, p1: &[R::E], d1: usize, p2: &[R::E], d2: usize) -> Poly<R::E> {
    let big = d1 * d2;
    let xs: Vec<R::E> = (0..=big as i64).map(|i| r.from_int(i)).collect();
    let ys: Vec<R::E> = xs
        .iter()
        .map(|y| {
            let q = shifted_reflection(r, &p2[..p2.len().min(d2 + 1)], y);
            resultant(r, p1, d1, &q, d2)
        })
        .collect();
    interpolate(r, &xs, &ys)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("linear system has no unique solution")]
    Singular,
}

/// Unique solution x of m x = b (m has rows of equal length) by
/// Gauss-Jordan elimination over a field.
pub fn solve<R: Ring>(r: &R, m: &[Vec<R::E>], b: &[R::E]) -> Result<Vec<R::E>, SolveError> {
    let rows = m.len();
    let cols = m.first().map_or(0, |x| x.len());
    let mut a: Vec<Vec<R::E>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut v = row.clone();
            v.push(bi.clone());
            v
        })
        .collect();
    let mut pivots = Vec::with_capacity(cols);
    let mut row = 0;
    for col in 0..cols {
        let Some(piv) = (row..rows)
            .filter_map(|i| r.pivot_key(&a[i][col]).map(|k| (k, i)))
            .min()
            .map(|(_, i)| i)
        else {
            return Err(SolveError::Singular);
        };
        a.swap(row, piv);
        let inv = r.inv(&a[row][col]).expect("pivot is a unit");
        for k in col..=cols {
            a[row][k] = r.mul(&a[row][k], &inv);
        }
        for i in 0..rows {
            if i != row && !r.is_zero(&a[i][col]) {
                let f = a[i][col].clone();
                for k in col..=cols {
                    let t = r.mul(&f, &a[row][k]);
                    a[i][k] = r.sub(&a[i][k], &t);
                }
            }
        }
        pivots.push(row);
        row += 1;
    }
    if a[row..].iter().any(|line| !r.is_zero(&line[cols])) {
        return Err(SolveError::Inconsistent);
    }
    Ok(pivots.iter().map(|&i| a[i][cols].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{q_int, Rationals};
    use num_rational::BigRational;

    fn qv(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| q_int(x)).collect()
    }

    #[test]
    fn det_small() {
        let m = vec![qv(&[2, 1, 0]), qv(&[1, 3, 1]), qv(&[0, 1, 4])];
        assert_eq!(det_expand(&Rationals, &m), q_int(18));
        assert_eq!(det(&Rationals, m), q_int(18));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = qv(&[3, -1, 0, 5]);
        let xs: Vec<_> = (0..4).map(q_int).collect();
        let ys: Vec<_> = xs.iter().map(|x| poly_eval(&Rationals, &p, x)).collect();
        assert_eq!(interpolate(&Rationals, &xs, &ys), p);
    }

    #[test]
    fn solve_unique_and_inconsistent() {
        let m = vec![qv(&[1, 1]), qv(&[1, -1]), qv(&[2, 0])];
        assert_eq!(solve(&Rationals, &m, &qv(&[3, 1, 4])).unwrap(), qv(&[2, 1]));
        assert_eq!(solve(&Rationals, &m, &qv(&[3, 1, 5])).unwrap_err(), SolveError::Inconsistent);
        let sing = vec![qv(&[1, 2]), qv(&[2, 4])];
        assert_eq!(solve(&Rationals, &sing, &qv(&[1, 2])).unwrap_err(), SolveError::Singular);
    }

    #[test]
    fn reflection_shift() {
        // p(X) = X^2 + 1, p(2 - X) = X^2 - 4X + 5
        let p = qv(&[1, 0, 1]);
        assert_eq!(shifted_reflection(&Rationals, &p, &q_int(2)), qv(&[5, -4, 1]));
    }
}
