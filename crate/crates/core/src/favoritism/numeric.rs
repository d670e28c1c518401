use super::{certified, check_dims, partition_at, soe_residuals, KappaSolution, SolveMethod};
use crate::error::{LottoError, Result};
use crate::game::{GameConfig, PreAllocation};

const MAX_NEWTON_ITERS: usize = 100;
const MAX_LOG_STEP: f64 = 4.0;

/// Solve the multiplier system numerically: damped Newton in log variables
/// from several starts, then nested bisection if every start stalls.
pub fn solve_numeric(p: &PreAllocation, cfg: &GameConfig) -> Result<KappaSolution> {
    check_dims(p, cfg)?;
    if cfg.r_a == 0.0 {
        return Err(LottoError::ZeroRealTimeA);
    }
    let mut best = f64::INFINITY;
    for (ka, kb) in starts(p, cfg) {
        match newton(ka, kb, p, cfg) {
            Ok(sol) => return Ok(sol),
            Err(r) => best = best.min(r),
        }
    }
    log::debug!("newton stalled (best scaled residual {best:e}); bisecting");
    solve_bisection(p, cfg).map_err(|e| match e {
        LottoError::ConvergenceFailure { best_residual } => LottoError::ConvergenceFailure {
            best_residual: best_residual.min(best),
        },
        other => other,
    })
}

fn finish(ka: f64, kb: f64, p: &PreAllocation, cfg: &GameConfig) -> KappaSolution {
    let res = soe_residuals(ka, kb, p, cfg);
    let (partition_b1, partition_b2) = partition_at(ka, kb, p, &cfg.w);
    KappaSolution {
        kappa_a: ka,
        kappa_b: kb,
        partition_b1,
        partition_b2,
        residual_a: res.0,
        residual_b: res.1,
        method: SolveMethod::NumericRootFind,
    }
}

fn starts(p: &PreAllocation, cfg: &GameConfig) -> Vec<(f64, f64)> {
    let (r_a, r_b, pre) = (cfg.r_a, cfg.effective_r_b(), p.total);
    let mut out = Vec::with_capacity(3);

    // every battlefield capped at w_b kappa_B
    let s: f64 = p.p.iter().zip(&cfg.w).map(|(pb, wb)| pb * pb / wb).sum();
    let c = pre + r_a;
    let kb = c + (c * c - s).max(0.0).sqrt();
    let ka = (c * kb - s) / r_b;
    if ka > 0.0 && kb > 0.0 {
        out.push((ka, kb));
    }
    if r_b > pre {
        let x = r_b - pre;
        out.push((2.0 * x, 2.0 * x * x / r_a));
    }
    out.push((2.0 * r_a, 2.0 * r_b));
    out
}

// Residuals and their Jacobian with respect to (kappa_A, kappa_B).
fn jacobian(ka: f64, kb: f64, p: &PreAllocation, w: &[f64]) -> [[f64; 2]; 2] {
    let mut j = [[0.0; 2]; 2];
    for (&pb, &wb) in p.p.iter().zip(w) {
        if wb * kb <= wb * ka + pb {
            j[0][1] += wb / 2.0 - pb * pb / (2.0 * wb * kb * kb);
            j[1][0] -= (wb * wb * kb * kb - pb * pb) / (2.0 * wb * ka * ka);
            j[1][1] += wb * kb / ka;
        } else {
            j[0][0] += wb * ka / kb;
            j[0][1] -= wb * ka * ka / (2.0 * kb * kb);
            j[1][0] += wb / 2.0;
        }
    }
    j
}

fn merit(res: (f64, f64), scale: f64) -> f64 {
    (res.0 / scale).abs().max((res.1 / scale).abs())
}

// Ok on convergence, Err(best scaled residual) on stall.
fn newton(
    ka0: f64,
    kb0: f64,
    p: &PreAllocation,
    cfg: &GameConfig,
) -> std::result::Result<KappaSolution, f64> {
    let scale = cfg.scale();
    let (mut x, mut y) = (ka0.ln(), kb0.ln());
    let mut res = soe_residuals(x.exp(), y.exp(), p, cfg);
    let mut phi = merit(res, scale);
    for _ in 0..MAX_NEWTON_ITERS {
        if phi <= 1e-14 {
            break;
        }
        let (ka, kb) = (x.exp(), y.exp());
        let j = jacobian(ka, kb, p, &cfg.w);
        // chain rule into log coordinates
        let (a, b, c, d) = (j[0][0] * ka, j[0][1] * kb, j[1][0] * ka, j[1][1] * kb);
        let det = a * d - b * c;
        if det == 0.0 || !det.is_finite() {
            return Err(phi);
        }
        let mut dx = (-res.0 * d + res.1 * b) / det;
        let mut dy = (-res.1 * a + res.0 * c) / det;
        let len = dx.abs().max(dy.abs());
        if len > MAX_LOG_STEP {
            dx *= MAX_LOG_STEP / len;
            dy *= MAX_LOG_STEP / len;
        }
        let mut t = 1.0;
        loop {
            let (nx, ny) = (x + t * dx, y + t * dy);
            let nres = soe_residuals(nx.exp(), ny.exp(), p, cfg);
            let nphi = merit(nres, scale);
            if nphi < phi || (nphi == phi && t == 1.0) {
                x = nx;
                y = ny;
                res = nres;
                phi = nphi;
                break;
            }
            t *= 0.5;
            if t < 1e-12 {
                return if certified(res, cfg) {
                    Ok(finish(x.exp(), y.exp(), p, cfg))
                } else {
                    Err(phi)
                };
            }
        }
        if dx.abs().max(dy.abs()) * t < 1e-16 {
            break;
        }
    }
    if certified(res, cfg) {
        Ok(finish(x.exp(), y.exp(), p, cfg))
    } else {
        Err(phi)
    }
}

/// Nested bisection: for each `kappa_A` the `B` equation is monotone in
/// `kappa_B`; the outer search brackets the `A` equation in `kappa_A`.
pub fn solve_bisection(p: &PreAllocation, cfg: &GameConfig) -> Result<KappaSolution> {
    check_dims(p, cfg)?;
    if cfg.r_a == 0.0 {
        return Err(LottoError::ZeroRealTimeA);
    }
    let scale = cfg.scale();
    let fail = |r: f64| LottoError::ConvergenceFailure { best_residual: r };
    let ka_min = (2.0 * (cfg.effective_r_b() - p.total)).max(0.0);

    let g = |ka: f64| -> Option<(f64, f64)> {
        let kb = inner_kappa_b(ka, p, cfg)?;
        Some((soe_residuals(ka, kb, p, cfg).0, kb))
    };

    // at the all-B2 solution kappa_A sits exactly on the edge of the domain
    // of the inner problem, so it is checked directly
    if ka_min > 0.0 {
        let max_ratio = max_ratio(p, &cfg.w);
        let kb = ka_min * ka_min / (2.0 * cfg.r_a);
        if kb - ka_min > max_ratio && certified(soe_residuals(ka_min, kb, p, cfg), cfg) {
            return Ok(finish(ka_min, kb, p, cfg));
        }
    }

    let mut hi = (2.0 * ka_min)
        .max(2.0 * cfg.r_a)
        .max(2.0 * cfg.effective_r_b())
        .max(1.0);
    let mut found_hi = false;
    for _ in 0..200 {
        if matches!(g(hi), Some((r, _)) if r > 0.0) {
            found_hi = true;
            break;
        }
        hi *= 2.0;
    }
    if !found_hi {
        return Err(fail(f64::INFINITY));
    }
    let mut lo = hi;
    let mut found_lo = false;
    for k in 1..1100 {
        lo = ka_min + (hi - ka_min) * 0.5f64.powi(k);
        if lo <= ka_min {
            break;
        }
        if matches!(g(lo), Some((r, _)) if r < 0.0) {
            found_lo = true;
            break;
        }
    }
    if !found_lo {
        return Err(fail(f64::INFINITY));
    }

    for _ in 0..400 {
        let mid = if lo > 0.0 {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi {
            break;
        }
        match g(mid) {
            Some((r, _)) if r < 0.0 => lo = mid,
            Some(_) => hi = mid,
            None => lo = mid,
        }
    }
    let mut best = None;
    for ka in [lo, hi] {
        if let Some((_, kb)) = g(ka) {
            let res = soe_residuals(ka, kb, p, cfg);
            let m = merit(res, scale);
            if best.map_or(true, |(bm, _, _)| m < bm) {
                best = Some((m, ka, kb));
            }
        }
    }
    let (m, ka, kb) = best.ok_or_else(|| fail(f64::INFINITY))?;
    if certified(soe_residuals(ka, kb, p, cfg), cfg) {
        Ok(finish(ka, kb, p, cfg))
    } else {
        Err(fail(m))
    }
}

fn max_ratio(p: &PreAllocation, w: &[f64]) -> f64 {
    p.p.iter()
        .zip(w)
        .map(|(pb, wb)| pb / wb)
        .fold(0.0, f64::max)
}

fn inner_kappa_b(ka: f64, p: &PreAllocation, cfg: &GameConfig) -> Option<f64> {
    let res_b = |kb: f64| soe_residuals(ka, kb, p, cfg).1;
    let mut lo = ka.min(1.0);
    let mut ok = false;
    for _ in 0..2100 {
        if res_b(lo) < 0.0 {
            ok = true;
            break;
        }
        lo *= 0.5;
        if lo == 0.0 {
            break;
        }
    }
    if !ok {
        return None;
    }
    let mut hi = (ka + max_ratio(p, &cfg.w) + 1.0).max(lo * 2.0);
    ok = false;
    for _ in 0..200 {
        if res_b(hi) >= 0.0 {
            ok = true;
            break;
        }
        hi *= 2.0;
    }
    if !ok {
        return None;
    }
    for _ in 0..400 {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if res_b(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if res_b(lo).abs() < res_b(hi).abs() {
        Some(lo)
    } else {
        Some(hi)
    }
}

#[cfg(test)]
mod tests {
    use super::super::solve_partition_closed;
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn symmetric_fixed_point() {
        let p = PreAllocation::new(vec![0.0]).unwrap();
        let cfg = GameConfig::single(0.0, 1.0, 1.0);
        let sol = solve_numeric(&p, &cfg).unwrap();
        assert_relative_eq!(sol.kappa_a, 2.0, max_relative = 1e-12);
        assert_relative_eq!(sol.kappa_b, 2.0, max_relative = 1e-12);
        assert_eq!(sol.method, SolveMethod::NumericRootFind);
    }

    #[test]
    fn agrees_with_closed_form() {
        let p = PreAllocation::new(vec![1.0]).unwrap();
        let cfg = GameConfig::single(1.0, 1.0, 1.0);
        let a = solve_numeric(&p, &cfg).unwrap();
        let b = solve_partition_closed(&p, &cfg).unwrap();
        assert_relative_eq!(a.kappa_a, b.kappa_a, max_relative = 1e-8);
        assert_relative_eq!(a.kappa_b, b.kappa_b, max_relative = 1e-8);
    }

    #[test]
    fn bisection_matches_newton() {
        let cases = [
            (vec![0.9, 0.1], vec![0.5, 0.5], 0.7, 1.2),
            (vec![0.2], vec![1.0], 0.1, 1.0),
            (vec![1.0], vec![1.0], 1.0, 1.0),
            (vec![0.0, 0.3, 2.0], vec![0.2, 0.3, 0.5], 0.4, 2.5),
        ];
        for (pv, w, r_a, r_b) in cases {
            let p = PreAllocation::new(pv).unwrap();
            let cfg = GameConfig::new(w, p.total, r_a, r_b);
            let a = solve_bisection(&p, &cfg).unwrap();
            let b = solve_partition_closed(&p, &cfg).unwrap();
            assert_relative_eq!(a.kappa_a, b.kappa_a, max_relative = 1e-8);
            assert_relative_eq!(a.kappa_b, b.kappa_b, max_relative = 1e-8);
            assert_eq!(a.partition_b1, b.partition_b1);
        }
    }
}
