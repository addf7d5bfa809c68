//! Structural and biophysical diagnostics of a run: input-output tables,
//! information metrics, net power, growth rates, decoupling and landmarks.

use crate::accounting::{debt_ratio, gdp_deflator, shares};
use crate::error::ModelError;
use crate::integrator::RunOutput;
use crate::model::AMatrix;
use crate::params::Params;

/// Monetary intermediate transactions, rows and columns ordered (goods,
/// extraction): `x[i][j]` is what sector `j` buys from sector `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IoTable {
    pub x: [[f64; 2]; 2],
}

pub fn io_table(p_e: f64, p_g: f64, a: &AMatrix, x_e: f64, x_g: f64) -> IoTable {
    IoTable {
        x: [
            [p_g * a.a_gg * x_g, p_g * a.a_ge * x_e],
            [p_e * a.a_eg * x_g, p_e * a.a_ee * x_e],
        ],
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfoMetrics {
    /// Information entropy of the flows (bits).
    pub h: f64,
    /// Mutual constraint (bits).
    pub x_mc: f64,
    /// Conditional entropy (bits).
    pub psi: f64,
    /// Total system throughput.
    pub tst: f64,
}

/// Entropy decomposition of a flow table of any size. Zero entries
/// contribute nothing.
pub fn info_metrics_n<const N: usize>(x: &[[f64; N]; N]) -> Result<InfoMetrics, ModelError> {
    let tst: f64 = x.iter().flatten().sum();
    if !(tst > 0.0) {
        return Err(ModelError::ZeroThroughput);
    }
    let rows: [f64; N] = std::array::from_fn(|i| x[i].iter().sum());
    let cols: [f64; N] = std::array::from_fn(|j| x.iter().map(|r| r[j]).sum());
    let (mut h, mut x_mc, mut psi) = (0.0, 0.0, 0.0);
    for i in 0..N {
        for j in 0..N {
            let v = x[i][j];
            if v <= 0.0 {
                continue;
            }
            let p = v / tst;
            h -= p * p.log2();
            x_mc += p * (v * tst / (rows[i] * cols[j])).log2();
            psi -= p * (v * v / (rows[i] * cols[j])).log2();
        }
    }
    Ok(InfoMetrics { h, x_mc, psi, tst })
}

pub fn info_metrics(t: &IoTable) -> Result<InfoMetrics, ModelError> {
    info_metrics_n(&t.x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetPower {
    /// Gross extraction per unit of net goods output.
    pub eps_eg: f64,
    /// Gross extraction per unit of net resource output.
    pub eps_ee: f64,
    pub nepr: f64,
    pub npr: f64,
    pub npr_upper: f64,
}

/// Inverse of a small square matrix by Gauss-Jordan elimination with
/// partial pivoting. `None` if the matrix is singular.
pub fn invert<const N: usize>(m: &[[f64; N]; N]) -> Option<[[f64; N]; N]> {
    let mut a = *m;
    let mut inv = [[0.0; N]; N];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for col in 0..N {
        let pivot = (col..N).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col] == 0.0 {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let d = a[col][col];
        for k in 0..N {
            a[col][k] /= d;
            inv[col][k] /= d;
        }
        for r in 0..N {
            if r != col {
                let f = a[r][col];
                if f != 0.0 {
                    for k in 0..N {
                        a[r][k] -= f * a[col][k];
                        inv[r][k] -= f * inv[col][k];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// `(1 - A)^-1` in (goods, extraction) order. Fails when the economy
/// cannot produce a positive net output (spectral radius of A at least 1).
pub fn leontief_inverse(a: &AMatrix) -> Result<[[f64; 2]; 2], ModelError> {
    let m = a.as_rows();
    let i_minus_a = [[1.0 - m[0][0], -m[0][1]], [-m[1][0], 1.0 - m[1][1]]];
    // For a nonnegative 2x2 matrix, spectral radius < 1 iff both diagonal
    // entries of 1 - A and its determinant are positive.
    let det = i_minus_a[0][0] * i_minus_a[1][1] - i_minus_a[0][1] * i_minus_a[1][0];
    if !(det > 0.0 && i_minus_a[0][0] > 0.0 && i_minus_a[1][1] > 0.0) {
        return Err(ModelError::SingularLeontief(det));
    }
    invert(&i_minus_a).ok_or(ModelError::SingularLeontief(det))
}

/// Resource intensities and net power ratios. `i_e_physical` is goods per
/// time invested in new extraction capital.
pub fn net_power(a: &AMatrix, x_e: f64, x_g: f64, i_e_physical: f64) -> Result<NetPower, ModelError> {
    if !(x_e > 0.0 && x_g > 0.0) {
        return Err(ModelError::Precondition(format!(
            "net power needs positive outputs, got X_e={x_e} X_g={x_g}"
        )));
    }
    let l = leontief_inverse(a)?;
    // Only the extraction sector draws on the environment, so the extraction
    // row of diag(y_extract) diag(X)^-1 is 1 and the goods row is 0.
    let (eps_eg, eps_ee) = (l[1][0], l[1][1]);
    let embodied = eps_eg * i_e_physical;
    let own_use = a.a_ee * x_e;
    Ok(NetPower {
        eps_eg,
        eps_ee,
        nepr: (x_e - embodied - own_use) / (embodied + own_use),
        npr: 1.0 / (eps_ee - 1.0),
        npr_upper: (1.0 - a.a_ee) / a.a_ee,
    })
}

/// Growth rate per unit time of a positive series: centered log differences
/// inside, one-sided at the ends. `None` where a needed value is not positive.
pub fn growth_rates(t: &[f64], v: &[f64]) -> Vec<Option<f64>> {
    let n = v.len();
    let ln = |i: usize| (v[i] > 0.0).then(|| v[i].ln());
    (0..n)
        .map(|i| {
            if n < 2 {
                return None;
            }
            let (lo, hi) = match i {
                0 => (0, 1),
                _ if i == n - 1 => (n - 2, n - 1),
                _ => (i - 1, i + 1),
            };
            Some((ln(hi)? - ln(lo)?) / (t[hi] - t[lo]))
        })
        .collect()
}

/// Signed distance from the 1:1 line; positive when resources grow faster
/// than output.
pub fn decoupling_distance(g_y: f64, g_r: f64) -> f64 {
    (g_r - g_y) / std::f64::consts::SQRT_2
}

/// Shoelace area of a path, positive if it turns counter-clockwise.
pub fn signed_area(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len().min(y.len());
    if n < 3 {
        return 0.0;
    }
    let mut s = 0.0;
    for i in 0..n {
        let j = (i + 1) % n;
        s += x[i] * y[j] - x[j] * y[i];
    }
    0.5 * s
}

/// Derived per-sample series of a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Derived {
    pub t: Vec<f64>,
    pub real_gdp: Vec<f64>,
    /// Gross resource extraction.
    pub extraction: Vec<f64>,
    pub g_y: Vec<Option<f64>>,
    pub g_r: Vec<Option<f64>>,
    pub decoupling: Vec<Option<f64>>,
    pub wage_share: Vec<f64>,
    pub profit_share: Vec<f64>,
    pub interest_share: Vec<f64>,
    pub depreciation_share: Vec<f64>,
    pub debt_ratio: Vec<f64>,
    /// Physical investment in new capital less depreciation (goods).
    pub net_investment: Vec<f64>,
    pub percap_extraction: Vec<f64>,
    pub h: Vec<f64>,
    pub x_mc: Vec<f64>,
    pub psi: Vec<f64>,
    pub nepr: Vec<f64>,
    pub npr: Vec<f64>,
    pub npr_upper: Vec<f64>,
    pub real_wage: Vec<f64>,
    pub cpi: Vec<f64>,
}

impl Derived {
    pub fn from_run(run: &RunOutput, p: &Params) -> Result<Self, ModelError> {
        let mut d = Derived::default();
        let Some(first) = run.samples.first() else {
            return Ok(d);
        };
        let base = first.state.core;
        for s in &run.samples {
            let c = &s.state.core;
            let f = &s.flows;
            let deflator = gdp_deflator(c, f, base.p_e, base.p_g);
            let sh = shares(f, c, p)?;
            let info = info_metrics(&io_table(c.p_e, c.p_g, &f.a, f.x_e, f.x_g))?;
            let np = net_power(&f.a, f.x_e, f.x_g, f.invest_e.new_capital / c.p_g)?;
            let cpi = s.state.sched.ln_cpi.exp();
            d.t.push(s.t);
            d.real_gdp.push(f.y_total() / deflator);
            d.extraction.push(f.x_e);
            d.wage_share.push(sh.wage);
            d.profit_share.push(sh.profit);
            d.interest_share.push(sh.interest);
            d.depreciation_share.push(sh.depreciation);
            d.debt_ratio.push(debt_ratio(c, f)?);
            d.net_investment.push(f.physical_investment(c.p_g) - p.delta * (c.k_e + c.k_g));
            d.percap_extraction.push(f.x_e / c.n);
            d.h.push(info.h);
            d.x_mc.push(info.x_mc);
            d.psi.push(info.psi);
            d.nepr.push(np.nepr);
            d.npr.push(np.npr);
            d.npr_upper.push(np.npr_upper);
            d.real_wage.push(c.w / cpi);
            d.cpi.push(cpi);
        }
        d.g_y = growth_rates(&d.t, &d.real_gdp);
        d.g_r = growth_rates(&d.t, &d.extraction);
        d.decoupling = d
            .g_y
            .iter()
            .zip(&d.g_r)
            .map(|(y, r)| Some(decoupling_distance((*y)?, (*r)?)))
            .collect();
        Ok(d)
    }
}

/// Time and value of a maximum. `boundary` marks a maximum at either end of
/// the record, which usually means the true peak lies outside it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Landmark {
    pub t: f64,
    pub value: f64,
    pub boundary: bool,
}

/// Location of the maximum of `v`, ignoring missing values.
pub fn argmax(t: &[f64], v: &[Option<f64>]) -> Option<Landmark> {
    let mut best: Option<(usize, f64)> = None;
    for (i, x) in v.iter().enumerate() {
        if let Some(x) = *x {
            if x.is_finite() && best.is_none_or(|(_, b)| x > b) {
                best = Some((i, x));
            }
        }
    }
    best.map(|(i, value)| Landmark { t: t[i], value, boundary: i == 0 || i + 1 == v.len() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Landmarks {
    pub max_extraction_growth: Option<Landmark>,
    /// Maximum of the profit plus interest share of value added.
    pub knee: Option<Landmark>,
    pub peak_net_investment: Option<Landmark>,
    pub peak_debt_ratio: Option<Landmark>,
    /// Largest distance below the 1:1 line, reported as a positive value.
    pub max_decoupling: Option<Landmark>,
    pub peak_percap_extraction: Option<Landmark>,
    pub peak_h: Option<Landmark>,
    pub peak_psi: Option<Landmark>,
    /// Intervals with output growing and extraction not growing.
    pub absolute_decoupling: Vec<(f64, f64)>,
}

fn some(v: &[f64]) -> Vec<Option<f64>> {
    v.iter().copied().map(Some).collect()
}

/// Closed intervals of consecutive samples where `pred` holds.
pub fn intervals(t: &[f64], pred: impl Fn(usize) -> bool) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for i in 0..t.len() {
        match (pred(i), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((t[s], t[i - 1]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((t[s], t[t.len() - 1]));
    }
    out
}

pub fn landmarks(d: &Derived) -> Landmarks {
    let knee: Vec<f64> = d.profit_share.iter().zip(&d.interest_share).map(|(a, b)| a + b).collect();
    let below: Vec<Option<f64>> = d.decoupling.iter().map(|x| x.map(|x| -x)).collect();
    Landmarks {
        max_extraction_growth: argmax(&d.t, &d.g_r),
        knee: argmax(&d.t, &some(&knee)),
        peak_net_investment: argmax(&d.t, &some(&d.net_investment)),
        peak_debt_ratio: argmax(&d.t, &some(&d.debt_ratio)),
        max_decoupling: argmax(&d.t, &below),
        peak_percap_extraction: argmax(&d.t, &some(&d.percap_extraction)),
        peak_h: argmax(&d.t, &some(&d.h)),
        peak_psi: argmax(&d.t, &some(&d.psi)),
        absolute_decoupling: intervals(&d.t, |i| match (d.g_y[i], d.g_r[i]) {
            (Some(y), Some(r)) => y > 0.0 && r <= 0.0,
            _ => false,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn table(x: [[f64; 2]; 2]) -> IoTable {
        IoTable { x }
    }

    #[test]
    fn boundary_tables() {
        let m = info_metrics(&table([[1.0, 1.0], [1.0, 1.0]])).unwrap();
        assert_relative_eq!(m.h, 2.0, epsilon = 1e-15);
        assert_relative_eq!(m.psi, 2.0, epsilon = 1e-15);
        assert_relative_eq!(m.x_mc, 0.0, epsilon = 1e-15);

        let m = info_metrics(&table([[0.0, 1.0], [1.0, 0.0]])).unwrap();
        assert_relative_eq!(m.h, 1.0, epsilon = 1e-15);
        assert_relative_eq!(m.x_mc, 1.0, epsilon = 1e-15);
        assert_relative_eq!(m.psi, 0.0, epsilon = 1e-15);

        let m = info_metrics(&table([[0.0, 0.0], [3.0, 0.0]])).unwrap();
        assert_eq!((m.h, m.x_mc, m.psi), (0.0, 0.0, 0.0));

        assert_eq!(info_metrics(&table([[0.0; 2]; 2])), Err(ModelError::ZeroThroughput));
    }

    fn amat(a_gg: f64, a_ge: f64, a_eg: f64, a_ee: f64) -> AMatrix {
        AMatrix { a_gg, a_ge, a_eg_o: a_eg, a_eg_i: 0.0, a_eg, a_ee }
    }

    #[test]
    fn io_entries() {
        let a = amat(0.1, 0.2, 0.39, 0.187);
        assert_eq!(io_table(1.0, 1.0, &a, 1.0, 1.0).x, [[0.1, 0.2], [0.39, 0.187]]);
        assert_eq!(io_table(2.0, 3.0, &amat(0.0, 0.0, 0.0, 0.0), 5.0, 7.0).x, [[0.0; 2]; 2]);
    }

    #[test]
    fn npr_of_pure_extraction() {
        let np = net_power(&amat(0.0, 0.0, 0.0, 0.2), 1.0, 1.0, 0.0).unwrap();
        assert_relative_eq!(np.eps_ee, 1.25, epsilon = 1e-15);
        assert_relative_eq!(np.npr, 4.0, epsilon = 1e-12);
        assert_relative_eq!(np.npr_upper, 4.0, epsilon = 1e-12);
        assert_relative_eq!(np.nepr, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn singular_economy() {
        assert!(matches!(
            leontief_inverse(&amat(0.5, 1.0, 1.0, 0.5)),
            Err(ModelError::SingularLeontief(_))
        ));
    }

    #[test]
    fn growth_of_constant_and_exponential() {
        let t: Vec<f64> = (0..10).map(|i| i as f64 * 0.25).collect();
        assert!(growth_rates(&t, &[3.0; 10]).iter().all(|g| *g == Some(0.0)));
        let e: Vec<f64> = t.iter().map(|t| (0.02 * t).exp()).collect();
        for g in growth_rates(&t, &e) {
            assert_relative_eq!(g.unwrap(), 0.02, epsilon = 1e-12);
        }
        let mut bad = e.clone();
        bad[4] = 0.0;
        let g = growth_rates(&t, &bad);
        assert_eq!((g[3], g[4], g[5]), (None, Some(g[4].unwrap()), None));
    }

    #[test]
    fn distance_from_diagonal() {
        assert_eq!(decoupling_distance(0.03, 0.03), 0.0);
        assert_relative_eq!(decoupling_distance(0.03, 0.02), -0.00707107, epsilon = 1e-8);
    }

    #[test]
    fn monotone_argmax_is_at_the_boundary() {
        let t = [0.0, 1.0, 2.0];
        let l = argmax(&t, &[Some(1.0), Some(2.0), Some(3.0)]).unwrap();
        assert_eq!((l.t, l.boundary), (2.0, true));
        let l = argmax(&t, &[Some(1.0), Some(5.0), Some(3.0)]).unwrap();
        assert_eq!((l.t, l.boundary), (1.0, false));
    }

    #[test]
    fn orientation() {
        let (x, y) = ([0.0, 1.0, 1.0, 0.0], [0.0, 0.0, 1.0, 1.0]);
        assert_relative_eq!(signed_area(&x, &y), 1.0);
        let (xr, yr): (Vec<f64>, Vec<f64>) = (x.iter().rev().copied().collect(), y.iter().rev().copied().collect());
        assert_relative_eq!(signed_area(&xr, &yr), -1.0);
    }

    #[test]
    fn interval_detection() {
        let t = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let v = [false, true, true, false, true, true];
        assert_eq!(intervals(&t, |i| v[i]), vec![(1.0, 2.0), (4.0, 5.0)]);
    }
}
