//! Small dense linear algebra: a complex solve by Gaussian elimination with
//! partial pivoting, and real eigenvalues by Hessenberg QR.

// Index loops mirror the textbook recurrences.
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Singular {
    pub column: usize,
}

/// Solves `a · X = rhs` in place; on success `rhs` holds `X`.
///
/// A pivot no larger than `N·ε·max|a_ij|` counts as singular. The elimination
/// order is fixed, so results are reproducible bit for bit.
pub(crate) fn solve_in_place<const N: usize, const M: usize>(
    a: &mut [[Complex64; N]; N],
    rhs: &mut [[Complex64; M]; N],
) -> Result<(), Singular> {
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .map(|z| z.norm())
        .fold(0.0_f64, f64::max);
    let tiny = N as f64 * f64::EPSILON * scale;

    for col in 0..N {
        let (pivot_row, pivot_abs) =
            (col..N)
                .map(|r| (r, a[r][col].norm()))
                .fold(
                    (col, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if pivot_abs <= tiny || pivot_abs == 0.0 {
            return Err(Singular { column: col });
        }
        if pivot_row != col {
            a.swap(pivot_row, col);
            rhs.swap(pivot_row, col);
        }
        let pivot = a[col][col];
        for r in col + 1..N {
            let factor = a[r][col] / pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            a[r][col] = Complex64::new(0.0, 0.0);
            for c in col + 1..N {
                let v = a[col][c];
                a[r][c] -= factor * v;
            }
            for k in 0..M {
                let v = rhs[col][k];
                rhs[r][k] -= factor * v;
            }
        }
    }

    for col in (0..N).rev() {
        let pivot = a[col][col];
        for k in 0..M {
            let mut acc = rhs[col][k];
            for c in col + 1..N {
                acc -= a[col][c] * rhs[c][k];
            }
            rhs[col][k] = acc / pivot;
        }
    }
    Ok(())
}

/// Francis QR did not deflate an eigenvalue within the iteration budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct NoConvergence;

const MAX_QR_ITERATIONS: usize = 60;

/// All eigenvalues of a real square matrix: balancing, reduction to upper
/// Hessenberg form by stabilized elimination, then double-shift QR.
///
/// Real eigenvalues come back with an imaginary part of exactly zero.
pub(crate) fn eigenvalues<const N: usize>(
    a: &[[f64; N]; N],
) -> Result<Vec<Complex64>, NoConvergence> {
    // 1-based working copy keeps the index arithmetic of the classic
    // formulation readable
    let n = N;
    let mut h = vec![vec![0.0_f64; n + 1]; n + 1];
    for i in 0..n {
        for j in 0..n {
            h[i + 1][j + 1] = a[i][j];
        }
    }
    balance(&mut h, n);
    hessenberg(&mut h, n);
    hessenberg_qr(&mut h, n)
}

fn balance(a: &mut [Vec<f64>], n: usize) {
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let (mut c, mut r) = (0.0, 0.0);
            for j in 1..=n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sqrdx;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sqrdx;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 1..=n {
                    a[i][j] *= g;
                }
                for j in 1..=n {
                    a[j][i] *= f;
                }
            }
        }
    }
}

fn hessenberg(a: &mut [Vec<f64>], n: usize) {
    for m in 2..n {
        let mut x = 0.0_f64;
        let mut i = m;
        for j in m..=n {
            if a[j][m - 1].abs() > x.abs() {
                x = a[j][m - 1];
                i = j;
            }
        }
        if i != m {
            for j in (m - 1)..=n {
                let t = a[i][j];
                a[i][j] = a[m][j];
                a[m][j] = t;
            }
            for row in a.iter_mut().take(n + 1).skip(1) {
                row.swap(i, m);
            }
        }
        if x != 0.0 {
            for i in (m + 1)..=n {
                let mut y = a[i][m - 1];
                if y != 0.0 {
                    y /= x;
                    a[i][m - 1] = y;
                    for j in m..=n {
                        a[i][j] -= y * a[m][j];
                    }
                    for j in 1..=n {
                        a[j][m] += y * a[j][i];
                    }
                }
            }
        }
    }
    for i in 3..=n {
        for j in 1..i - 1 {
            a[i][j] = 0.0;
        }
    }
}

fn hessenberg_qr(a: &mut [Vec<f64>], n: usize) -> Result<Vec<Complex64>, NoConvergence> {
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a[i][j].abs();
        }
    }
    let sign = |x: f64, s: f64| if s >= 0.0 { x.abs() } else { -x.abs() };

    let mut nn = n;
    let mut t = 0.0;
    while nn >= 1 {
        let mut its = 0;
        loop {
            // look for a negligible subdiagonal element
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let l = l.max(1);
            let mut x = a[nn][nn];
            if l == nn {
                out[nn] = Complex64::new(x + t, 0.0);
                nn -= 1;
            } else {
                let mut y = a[nn - 1][nn - 1];
                let mut w = a[nn][nn - 1] * a[nn - 1][nn];
                if l == nn - 1 {
                    let p = 0.5 * (y - x);
                    let q = p * p + w;
                    let mut z = q.abs().sqrt();
                    x += t;
                    if q >= 0.0 {
                        z = p + sign(z, p);
                        out[nn - 1] = Complex64::new(x + z, 0.0);
                        out[nn] = if z != 0.0 {
                            Complex64::new(x - w / z, 0.0)
                        } else {
                            Complex64::new(x + z, 0.0)
                        };
                    } else {
                        out[nn - 1] = Complex64::new(x + p, -z);
                        out[nn] = Complex64::new(x + p, z);
                    }
                    nn -= 2;
                } else {
                    if its == MAX_QR_ITERATIONS {
                        return Err(NoConvergence);
                    }
                    if its > 0 && its % 10 == 0 {
                        // exceptional shift
                        t += x;
                        for i in 1..=nn {
                            a[i][i] -= x;
                        }
                        let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                        x = 0.75 * s;
                        y = x;
                        w = -0.4375 * s * s;
                    }
                    its += 1;

                    let (mut p, mut q, mut r, mut z);
                    let mut m = nn - 2;
                    loop {
                        z = a[m][m];
                        r = x - z;
                        let s = y - z;
                        p = (r * s - w) / a[m + 1][m] + a[m][m + 1];
                        q = a[m + 1][m + 1] - z - r - s;
                        r = a[m + 2][m + 1];
                        let s = p.abs() + q.abs() + r.abs();
                        p /= s;
                        q /= s;
                        r /= s;
                        if m == l {
                            break;
                        }
                        let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in (m + 2)..=nn {
                        a[i][i - 2] = 0.0;
                        if i != m + 2 {
                            a[i][i - 3] = 0.0;
                        }
                    }
                    let mut k = m;
                    while k < nn {
                        if k != m {
                            p = a[k][k - 1];
                            q = a[k + 1][k - 1];
                            r = if k != nn - 1 { a[k + 2][k - 1] } else { 0.0 };
                            x = p.abs() + q.abs() + r.abs();
                            if x != 0.0 {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != 0.0 {
                            if k == m {
                                if l != m {
                                    a[k][k - 1] = -a[k][k - 1];
                                }
                            } else {
                                a[k][k - 1] = -s * x;
                            }
                            p += s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for j in k..=nn {
                                let mut pp = a[k][j] + q * a[k + 1][j];
                                if k != nn - 1 {
                                    pp += r * a[k + 2][j];
                                    a[k + 2][j] -= pp * z;
                                }
                                a[k + 1][j] -= pp * y;
                                a[k][j] -= pp * x;
                            }
                            let mmin = nn.min(k + 3);
                            for i in l..=mmin {
                                let mut pp = x * a[i][k] + y * a[i][k + 1];
                                if k != nn - 1 {
                                    pp += z * a[i][k + 2];
                                    a[i][k + 2] -= pp * r;
                                }
                                a[i][k + 1] -= pp * q;
                                a[i][k] -= pp;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 2 || l + 1 >= nn {
                break;
            }
        }
    }
    out.remove(0);
    Ok(out)
}
