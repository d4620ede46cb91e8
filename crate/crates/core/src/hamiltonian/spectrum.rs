use super::problem::SearchProblem;
use super::schedule::Schedule;
use crate::error::{Error, Result};
use crate::linalg::{inner, HermitianSpectrum};

/// Levels closer than this are treated as one degenerate level.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Golden-section refinement stops once the bracket is this narrow.
pub const REFINE_TOL: f64 = 1e-8;

/// Instantaneous spectrum at normalized time `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPoint {
    pub s: f64,
    /// All `N` eigenvalues, ascending.
    pub energies: Vec<f64>,
    /// `E1 - E0`.
    pub gap: f64,
    /// `|<E1|dH/ds|E0>|`. When `E1` is degenerate this is the norm of the
    /// projection of `dH/ds |E0>` onto the whole `E1` eigenspace, which is
    /// basis independent and continuous in `s`.
    pub matrix_element: f64,
}

impl SpectralPoint {
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }
}

/// Spectrum, gap and adiabatic matrix element of `H(s)`.
pub fn spectral_point(problem: &SearchProblem, schedule: &Schedule, s: f64) -> Result<SpectralPoint> {
    let h = problem.hamiltonian_at(schedule, s)?;
    let spectrum = HermitianSpectrum::compute(&h)?;
    let energies = spectrum.values().to_vec();
    let gap = (energies[1] - energies[0]).max(0.0);

    let ground = spectrum.eigenvector(0);
    let w = problem.apply_dh_ds(schedule, s, &ground)?;
    let e1 = energies[1];
    let matrix_element = energies
        .iter()
        .enumerate()
        .skip(1)
        .take_while(|(_, &e)| e - e1 <= DEGENERACY_TOL)
        .map(|(k, _)| inner(&spectrum.eigenvector(k), &w).norm_sqr())
        .sum::<f64>()
        .sqrt();

    Ok(SpectralPoint {
        s: s.clamp(0.0, 1.0),
        energies,
        gap,
        matrix_element,
    })
}

/// Spectral points on the uniform grid `s_k = k / (grid_points - 1)`.
pub fn spectrum_trace(
    problem: &SearchProblem,
    schedule: &Schedule,
    grid_points: usize,
) -> Result<Vec<SpectralPoint>> {
    grid(grid_points)?
        .map(|s| spectral_point(problem, schedule, s))
        .collect()
}

pub(crate) fn grid(points: usize) -> Result<impl Iterator<Item = f64>> {
    if points < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid needs at least 2 points, got {points}"
        )));
    }
    let last = (points - 1) as f64;
    Ok((0..points).map(move |k| k as f64 / last))
}

/// Location and value of the minimum gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapMinimum {
    pub s: f64,
    pub gap: f64,
}

/// Grid minimum of `trace`, refined by golden-section search of `gap_at`
/// over the neighbouring grid interval.
pub fn min_gap<F>(trace: &[SpectralPoint], gap_at: F) -> Result<GapMinimum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (k, best) = trace
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.gap.total_cmp(&b.1.gap))
        .ok_or(Error::EmptyTrace)?;
    let lo = trace[k.saturating_sub(1)].s;
    let hi = trace[(k + 1).min(trace.len() - 1)].s;
    let (s, gap) = golden_section(lo, hi, gap_at)?;
    Ok(if gap < best.gap {
        GapMinimum { s, gap }
    } else {
        GapMinimum {
            s: best.s,
            gap: best.gap,
        }
    })
}

impl SearchProblem {
    /// [`min_gap`] refined against this problem's spectrum.
    pub fn min_gap(&self, schedule: &Schedule, trace: &[SpectralPoint]) -> Result<GapMinimum> {
        min_gap(trace, |s| {
            let h = self.hamiltonian_at(schedule, s)?;
            let v = HermitianSpectrum::compute(&h)?;
            Ok(v.values()[1] - v.values()[0])
        })
    }
}

/// Minimizes `f` on `[lo, hi]` to [`REFINE_TOL`]; returns `(x, f(x))`.
pub(crate) fn golden_section<F>(mut lo: f64, mut hi: f64, mut f: F) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > REFINE_TOL {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let (x, fx) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    polish_vertex(x, fx, &mut f)
}

/// Parabolic vertex through `x` and `x +- POLISH_STEP`; kept only if it stays
/// within one step and does not increase `f` beyond rounding. Locates flat minima well below
/// the square-root-of-epsilon limit of bracketing alone.
fn polish_vertex<F>(x: f64, fx: f64, f: &mut F) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    const POLISH_STEP: f64 = 1e-5;
    let h = POLISH_STEP;
    if x - h < 0.0 || x + h > 1.0 {
        return Ok((x, fx));
    }
    let fm = f(x - h)?;
    let fp = f(x + h)?;
    let curvature = fp - 2.0 * fx + fm;
    if !(curvature > 0.0) {
        return Ok((x, fx));
    }
    let xv = x - h * (fp - fm) / (2.0 * curvature);
    if (xv - x).abs() > h {
        return Ok((x, fx));
    }
    let fv = f(xv)?;
    // near the minimum both values agree to rounding; trust the fit there
    let noise = 16.0 * f64::EPSILON * fx.abs();
    Ok(if fv <= fx + noise { (xv, fv) } else { (x, fx) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_qubit_midpoint_spectrum() {
        let p = SearchProblem::uniform(2, 0).unwrap();
        let pt = spectral_point(&p, &Schedule::linear(), 0.5).unwrap();
        for (e, want) in pt.energies.iter().zip([0.25, 0.75, 1.0, 1.0]) {
            assert!((e - want).abs() < 1e-14, "{e} vs {want}");
        }
        assert!((pt.gap - 0.5).abs() < 1e-14);
    }

    #[test]
    fn endpoint_gaps_are_one() {
        for n in [1, 3, 5] {
            let p = SearchProblem::uniform(n, 0).unwrap();
            let trace = spectrum_trace(&p, &Schedule::linear(), 5).unwrap();
            assert!((trace[0].gap - 1.0).abs() < 1e-13);
            assert!((trace[4].gap - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn degenerate_endpoint_matrix_element_is_continuous() {
        let p = SearchProblem::uniform(3, 2).unwrap();
        let lin = Schedule::linear();
        let at0 = spectral_point(&p, &lin, 0.0).unwrap().matrix_element;
        let near = spectral_point(&p, &lin, 1e-7).unwrap().matrix_element;
        assert!((at0 - near).abs() < 1e-5, "{at0} vs {near}");
        // a sqrt(1 - a^2) with a = 1/sqrt(8)
        let a = 1.0 / 8f64.sqrt();
        assert!((at0 - a * (1.0 - a * a).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn min_gap_cases() {
        let p = SearchProblem::uniform(2, 0).unwrap();
        let lin = Schedule::linear();
        let trace = spectrum_trace(&p, &lin, 64).unwrap();
        let m = p.min_gap(&lin, &trace).unwrap();
        assert!((m.s - 0.5).abs() < 1e-10);
        assert!((m.gap - 0.5).abs() < 1e-12);

        // a frozen spectrum has the same gap everywhere
        let frozen: Vec<SpectralPoint> = (0..5)
            .map(|k| SpectralPoint {
                s: k as f64 / 4.0,
                energies: vec![0.0, 1.0],
                gap: 1.0,
                matrix_element: 0.0,
            })
            .collect();
        assert_eq!(min_gap(&frozen, |_| Ok(1.0)).unwrap().gap, 1.0);
        assert_eq!(min_gap(&[], |_| Ok(1.0)), Err(Error::EmptyTrace));
    }

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let (x, fx) = golden_section(0.0, 1.0, |x| Ok((x - 0.3) * (x - 0.3) + 2.0)).unwrap();
        assert!((x - 0.3).abs() < 1e-10, "{x}");
        assert!((fx - 2.0).abs() < 1e-15);
    }
}
