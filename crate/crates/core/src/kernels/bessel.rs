//! Integer-order Bessel functions of the first kind for complex argument.

use crate::error::{Error, Result};
use num_complex::Complex64;

const SERIES_RADIUS: f64 = 8.0;
const DOMAIN: f64 = 1e4;
const RESCALE: f64 = 1e120;

fn check_arg(z: Complex64) -> Result<()> {
    if z.re.is_nan() || z.im.is_nan() {
        return Err(Error::InvalidParameter("Bessel argument is NaN".into()));
    }
    if z.norm() >= DOMAIN {
        return Err(Error::InvalidParameter(format!("|z| = {} outside Bessel domain", z.norm())));
    }
    if z.im.abs() > 700.0 {
        return Err(Error::Overflow(format!("J_n({z}) exceeds double range")));
    }
    Ok(())
}

fn series(n: usize, z: Complex64, pref: Complex64) -> Complex64 {
    // pref = (z/2)^n / n!
    let q = -z * z * 0.25;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (n + k) as f64);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    pref * sum
}

/// J_0(z), …, J_{nmax}(z).
pub fn bessel_j_range(nmax: usize, z: Complex64) -> Result<Vec<Complex64>> {
    check_arg(z)?;
    let mut out = vec![Complex64::new(0.0, 0.0); nmax + 1];
    if z.norm() == 0.0 {
        out[0] = Complex64::new(1.0, 0.0);
        return Ok(out);
    }
    if z.norm() < SERIES_RADIUS {
        let mut pref = Complex64::new(1.0, 0.0);
        for (n, slot) in out.iter_mut().enumerate() {
            if n > 0 {
                pref *= z * 0.5 / n as f64;
            }
            if pref.norm() == 0.0 {
                break;
            }
            *slot = series(n, z, pref);
        }
        return Ok(out);
    }
    miller(nmax, z, &mut out);
    Ok(out)
}

fn miller(nmax: usize, z: Complex64, out: &mut [Complex64]) {
    let az = z.norm();
    let mut start = (nmax as f64).max(az) + 40.0 + 12.0 * az.cbrt();
    start = 2.0 * (start / 2.0).ceil();
    let start = start as usize;
    let upper = z.im >= 0.0;
    // normalisation sum: e^{∓iz} = J_0 + 2 Σ (∓i)^n J_n
    let unit = if upper { Complex64::new(0.0, -1.0) } else { Complex64::new(0.0, 1.0) };
    let powers = [Complex64::new(1.0, 0.0), unit, unit * unit, unit * unit * unit];
    let mut f_next = Complex64::new(0.0, 0.0);
    let mut f = Complex64::new(1e-30, 0.0);
    let mut norm = Complex64::new(0.0, 0.0);
    for k in (1..=start).rev() {
        if k <= nmax {
            out[k] = f;
        }
        norm += 2.0 * powers[k % 4] * f;
        let f_prev = f * (2.0 * k as f64) / z - f_next;
        f_next = f;
        f = f_prev;
        if f.norm() > RESCALE {
            let s = 1.0 / RESCALE;
            f *= s;
            f_next *= s;
            norm *= s;
            for v in out.iter_mut() {
                *v *= s;
            }
        }
    }
    out[0] = f;
    norm += f;
    let target = if upper { (-Complex64::i() * z).exp() } else { (Complex64::i() * z).exp() };
    let scale = target / norm;
    for v in out.iter_mut() {
        *v *= scale;
    }
}

/// J_n(z) for any integer order.
pub fn bessel_j(n: i64, z: Complex64) -> Result<Complex64> {
    let k = n.unsigned_abs() as usize;
    let v = bessel_j_range(k, z)?[k];
    Ok(if n < 0 && k % 2 == 1 { -v } else { v })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    // reference values from a 30-digit arbitrary-precision evaluation
    #[allow(clippy::excessive_precision)]
    const REFS: &[(i64, f64, f64, f64, f64)] = &[
        (0, 1.0, 0.0, 0.7651976865579665514497, 0.0),
        (1, 1.0, 0.0, 0.4400505857449335159597, 0.0),
        (2, 0.0, 2.0, -0.688948447698738204055, 0.0),
        (5, 3.5, 0.0, 0.08044198664799178180456, 0.0),
        (0, 12.5, 0.0, 0.1468840547004211023064, 0.0),
        (3, 25.0, 0.0, 0.1083430810615088952845, 0.0),
        (10, 9.0, 0.0, 0.1246940928283167220311, 0.0),
        (1, 2.0, 1.5, 1.09918742876951518649, -0.1522619945209219251737),
        (4, 6.0, -4.0, 4.356279184849720306615, 0.9248148878316208231309),
        (7, 15.0, 10.0, -40.11563208859739220618, 974.5722072736111969881),
        (0, 0.001, 0.0, 0.9999997500000156249996, 0.0),
        (20, 1.0, 0.0, 3.873503008524657718915e-25, 0.0),
        (-3, 4.0, 0.0, -0.4301714738756219403582, 0.0),
        (2, 40.0, -3.0, 0.03620340560236342561867, -1.257830029037241932088),
        (0, 500.0, 0.0, -0.03410055688073199826513, 0.0),
        (50, 60.0, 2.0, -0.2313894459296145409736, -0.007013811812399633441172),
    ];

    #[test]
    fn reference_values() {
        for &(n, zr, zi, wr, wi) in REFS {
            let got = bessel_j(n, c(zr, zi)).unwrap();
            assert!(rel(got, c(wr, wi)) < 1e-12, "J_{n}({zr}+{zi}i) = {got}, want {wr}+{wi}i");
        }
    }

    #[test]
    fn at_origin() {
        assert_eq!(bessel_j(0, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        for n in [1, 2, -3, 17] {
            assert_eq!(bessel_j(n, c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        }
    }

    #[test]
    fn series_and_recurrence_agree_at_boundary() {
        for z in [c(7.999, 0.0), c(5.0, 5.65), c(0.0, 7.99)] {
            let a = bessel_j_range(30, z).unwrap();
            let mut b = vec![c(0.0, 0.0); 31];
            miller(30, z, &mut b);
            for n in 0..20 {
                assert!((a[n] - b[n]).norm() <= 1e-12 * a[0].norm().max(a[n].norm()), "n={n} z={z}");
            }
        }
    }

    #[test]
    fn bad_inputs() {
        assert!(bessel_j(0, c(f64::NAN, 0.0)).is_err());
        assert!(bessel_j(0, c(2e4, 0.0)).is_err());
        assert!(matches!(bessel_j(0, c(0.0, 800.0)), Err(Error::Overflow(_))));
    }

    #[test]
    fn normalisation_survives_large_growth() {
        // backward recurrence grows by ~1e154 here
        let z = c(47.6175, 0.0);
        for nmax in [150, 200, 250, 400] {
            let j = bessel_j_range(nmax, z).unwrap();
            assert!(rel(j[0], c(-0.11064821147868227, 0.0)) < 1e-12, "nmax {nmax}");
        }
    }
}
