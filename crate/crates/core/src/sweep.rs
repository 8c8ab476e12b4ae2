//! Parameter sweeps and figure tables, with CSV output.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::channel::{build_channel, DisentanglementParams};
use crate::efficiency::{cpro_copy, cpro_general, cpro_port, maximize_over_unit_interval, monte_carlo_on_channel};
use crate::entanglement::{eg1_pair, eg1_single, global_entanglement, PairKind};
use crate::error::{Error, Result};
use crate::protocol::CopySlot;
use crate::quantum::C64;

/// A rectangular table of floats with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// Writes `# comment` lines, the header, then rows at 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: W, comments: &[String]) -> Result<()> {
        let mut out = out;
        for c in comments {
            writeln!(out, "# {c}").map_err(io_err)?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format!("{v:.16e}")))
                .map_err(csv_err)?;
        }
        w.flush().map_err(io_err)?;
        Ok(())
    }

    /// Parses output of [`Table::write_csv`], skipping `#` lines.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Table> {
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
        let header = r.headers().map_err(csv_err)?.iter().map(str::to_owned).collect();
        let rows = r
            .records()
            .map(|rec| {
                rec.map_err(csv_err)?
                    .iter()
                    .map(|f| {
                        f.parse::<f64>()
                            .map_err(|e| Error::InvalidParameter(format!("bad float {f:?}: {e}")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(Table { header, rows })
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Evenly spaced values from `start` to `stop` inclusive.
pub fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !start.is_finite() || !stop.is_finite() || step.is_nan() || step <= 0.0 || start > stop {
        return Err(Error::InvalidParameter(format!("bad range {start}:{stop}:{step}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| (start + k as f64 * step).min(stop)).collect())
}

/// Monte Carlo settings for optional estimate columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McColumns {
    pub samples: u64,
    pub seed: u64,
}

fn mc_header(header: &mut Vec<String>) {
    header.extend(["mc_cpro_1", "mc_stderr_1", "mc_cpro_2", "mc_stderr_2"].map(String::from));
}

fn mc_values(params: &DisentanglementParams, m: f64, mc: McColumns) -> Result<[f64; 4]> {
    let [a, b] = monte_carlo_on_channel(&build_channel(params), C64::new(m, 0.0), mc.samples, mc.seed)?;
    Ok([a.mean, a.stderr, b.mean, b.stderr])
}

/// Data sets behind the published plots. All use `m = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Global entanglement and efficiency against a single port parameter.
    Eg1Curve,
    /// Global entanglement over `(n_A, n_P)` with the copies at 1.
    Eg1Surface,
    /// Efficiency against global entanglement, port family.
    CproVsEgPort,
    /// Efficiency against global entanglement, `n_C1 = n_C2` family.
    CproVsEgCopy,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Self::Eg1Curve, Self::Eg1Surface, Self::CproVsEgPort, Self::CproVsEgCopy];

    pub fn name(self) -> &'static str {
        match self {
            Self::Eg1Curve => "eg1-curve",
            Self::Eg1Surface => "eg1-surface",
            Self::CproVsEgPort => "cpro-vs-eg-port",
            Self::CproVsEgCopy => "cpro-vs-eg-copy",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown figure {s:?}")))
    }
}

/// Builds the table for `fig` on a grid of spacing `step` over `[0, 1]`.
pub fn figure_table(fig: Figure, step: f64, mc: Option<McColumns>) -> Result<Table> {
    let ns = grid(0.0, 1.0, step)?;
    let (mut header, points): (Vec<String>, Vec<(Vec<f64>, DisentanglementParams)>) = match fig {
        Figure::Eg1Curve => (
            vec!["n".into()],
            ns.iter()
                .map(|&n| (vec![n], DisentanglementParams::new(n, 1.0, 1.0, 1.0)))
                .collect(),
        ),
        Figure::CproVsEgPort => (
            vec!["n_p".into()],
            ns.iter()
                .map(|&n| (vec![n], DisentanglementParams::new(n, 1.0, 1.0, 1.0)))
                .collect(),
        ),
        Figure::CproVsEgCopy => (
            vec!["n_c".into()],
            ns.iter()
                .map(|&n| (vec![n], DisentanglementParams::new(1.0, 1.0, n, n)))
                .collect(),
        ),
        Figure::Eg1Surface => (
            vec!["n_a".into(), "n_p".into()],
            ns.iter()
                .flat_map(|&a| {
                    ns.iter()
                        .map(move |&p| (vec![a, p], DisentanglementParams::new(p, a, 1.0, 1.0)))
                })
                .collect(),
        ),
    };
    header.extend(["eg1", "cpro_1", "cpro_2"].map(String::from));
    if mc.is_some() {
        mc_header(&mut header);
    }

    let rows = points
        .par_iter()
        .map(|(coords, p)| {
            let [np, na, n1, n2] = p.as_array();
            let (eg, c1, c2) = match fig {
                Figure::Eg1Curve | Figure::CproVsEgPort => {
                    let c = cpro_port(np, 1.0);
                    (eg1_single(np).value(), c, c)
                }
                Figure::CproVsEgCopy => (
                    eg1_pair(n1, n2, PairKind::SameRole).value(),
                    cpro_copy(n1, n2, 1.0, CopySlot::First),
                    cpro_copy(n1, n2, 1.0, CopySlot::Second),
                ),
                Figure::Eg1Surface => (
                    eg1_pair(na, np, PairKind::SameRole).value(),
                    cpro_general(p, 1.0, CopySlot::First),
                    cpro_general(p, 1.0, CopySlot::Second),
                ),
            };
            let mut row = coords.clone();
            row.extend([eg, c1, c2]);
            if let Some(mc) = mc {
                row.extend(mc_values(p, 1.0, mc)?);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { header, rows })
}

/// How `m` is chosen at each sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MPolicy {
    Fixed(f64),
    /// `m = n_P`, the port-compensating choice.
    Port,
    /// Maximize copy 1's efficiency over `m ∈ [0, 1]`.
    Maximize,
}

impl FromStr for MPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "port" => Ok(Self::Port),
            "max" => Ok(Self::Maximize),
            _ => {
                let v: f64 = s
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("m must be a number, 'port' or 'max', got {s:?}")))?;
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidParameter(format!("m must lie in [0, 1], got {v}")));
                }
                Ok(Self::Fixed(v))
            }
        }
    }
}

impl MPolicy {
    pub fn resolve(self, params: &DisentanglementParams) -> f64 {
        match self {
            Self::Fixed(m) => m,
            Self::Port => params.port,
            Self::Maximize => maximize_over_unit_interval(|m| cpro_general(params, m, CopySlot::First)),
        }
    }
}

/// Which parameter an axis varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Port,
    Ancilla,
    Copy1,
    Copy2,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            Self::Port => "n_p",
            Self::Ancilla => "n_a",
            Self::Copy1 => "n_c1",
            Self::Copy2 => "n_c2",
        }
    }

    fn set(self, p: &mut DisentanglementParams, v: f64) {
        match self {
            Self::Port => p.port = v,
            Self::Ancilla => p.ancilla = v,
            Self::Copy1 => p.copy1 = v,
            Self::Copy2 => p.copy2 = v,
        }
    }
}

/// One swept parameter, written `name:start:stop:step` (e.g. `n_p:0:1:0.1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("axis must be name:start:stop:step, got {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        let [name, a, b, c] = parts[..] else { return Err(bad()) };
        let param = match name.to_ascii_lowercase().as_str() {
            "n_p" | "np" => SweepParam::Port,
            "n_a" | "na" => SweepParam::Ancilla,
            "n_c1" | "nc1" => SweepParam::Copy1,
            "n_c2" | "nc2" => SweepParam::Copy2,
            _ => return Err(bad()),
        };
        let num = |x: &str| x.parse::<f64>().map_err(|_| bad());
        let axis = Axis {
            param,
            start: num(a)?,
            stop: num(b)?,
            step: num(c)?,
        };
        grid(axis.start, axis.stop, axis.step)?;
        if axis.start < 0.0 || axis.stop > 1.0 {
            return Err(Error::InvalidParameter(format!("axis {name} must stay within [0, 1]")));
        }
        Ok(axis)
    }
}

/// A Cartesian sweep over some parameters with the rest held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axes: Vec<Axis>,
    pub fixed: DisentanglementParams,
    pub m: MPolicy,
    pub mc: Option<McColumns>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.fixed.check_physical()?;
        if self.axes.is_empty() {
            return Err(Error::InvalidParameter("sweep needs at least one axis".into()));
        }
        for (i, a) in self.axes.iter().enumerate() {
            if self.axes[..i].iter().any(|b| b.param == a.param) {
                return Err(Error::InvalidParameter(format!("{} swept twice", a.param.name())));
            }
        }
        Ok(())
    }

    /// All parameter points, the last axis varying fastest.
    pub fn points(&self) -> Result<Vec<(Vec<f64>, DisentanglementParams)>> {
        let mut points = vec![(Vec::new(), self.fixed)];
        for axis in &self.axes {
            let values = grid(axis.start, axis.stop, axis.step)?;
            points = points
                .into_iter()
                .flat_map(|(coords, p)| {
                    values.iter().map(move |&v| {
                        let mut c = coords.clone();
                        c.push(v);
                        let mut q = p;
                        axis.param.set(&mut q, v);
                        (c, q)
                    })
                })
                .collect();
        }
        Ok(points)
    }

    /// Columns: swept coordinates, `m`, eg1, cpro_1, cpro_2, then optional
    /// Monte Carlo columns. Global entanglement comes from the channel state.
    pub fn run(&self) -> Result<Table> {
        self.validate()?;
        let mut header: Vec<String> = self.axes.iter().map(|a| a.param.name().to_owned()).collect();
        header.extend(["m", "eg1", "cpro_1", "cpro_2"].map(String::from));
        if self.mc.is_some() {
            mc_header(&mut header);
        }
        let rows = self
            .points()?
            .par_iter()
            .map(|(coords, p)| {
                let m = self.m.resolve(p);
                let mut row = coords.clone();
                row.extend([
                    m,
                    global_entanglement(&build_channel(p)).value(),
                    cpro_general(p, m, CopySlot::First),
                    cpro_general(p, m, CopySlot::Second),
                ]);
                if let Some(mc) = self.mc {
                    row.extend(mc_values(p, m, mc)?);
                }
                Ok(row)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Table { header, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = grid(0.0, 1.0, 0.01).unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g[100], 1.0);
        assert_eq!(grid(0.2, 0.2, 0.1).unwrap(), vec![0.2]);
        assert!(grid(0.0, 1.0, 0.0).is_err());
        assert!(grid(1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn figure_endpoints() {
        let t = figure_table(Figure::Eg1Curve, 0.01, None).unwrap();
        let last = t.rows.last().unwrap();
        assert!((last[1] - 1.0).abs() < 1e-12 && (last[2] - 5.0 / 6.0).abs() < 1e-12);

        let t = figure_table(Figure::CproVsEgCopy, 0.01, None).unwrap();
        assert!((t.rows[0][2] - 2.0 / 3.0).abs() < 1e-12);
        assert!((t.rows[100][2] - 5.0 / 6.0).abs() < 1e-12);

        let t = figure_table(Figure::Eg1Surface, 0.1, None).unwrap();
        assert_eq!(t.rows.len(), 121);
        assert!((t.rows[120][2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip() {
        let t = figure_table(Figure::CproVsEgPort, 0.05, None).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf, &["test".into()]).unwrap();
        assert!(buf.starts_with(b"# test\nn_p,eg1,cpro_1,cpro_2\n"));
        assert_eq!(Table::read_csv(&buf[..]).unwrap(), t);
    }

    #[test]
    fn sweep_columns_and_order() {
        let spec = SweepSpec {
            axes: vec!["n_p:0:1:0.5".parse().unwrap(), "n_c2:0.5:1:0.5".parse().unwrap()],
            fixed: DisentanglementParams::IDEAL,
            m: MPolicy::Port,
            mc: None,
        };
        let t = spec.run().unwrap();
        assert_eq!(t.header, ["n_p", "n_c2", "m", "eg1", "cpro_1", "cpro_2"]);
        let coords: Vec<(f64, f64)> = t.rows.iter().map(|r| (r[0], r[1])).collect();
        assert_eq!(
            coords,
            [(0.0, 0.5), (0.0, 1.0), (0.5, 0.5), (0.5, 1.0), (1.0, 0.5), (1.0, 1.0)]
        );
        assert!(t.rows.iter().all(|r| r[2] == r[0]));
    }

    #[test]
    fn parsing_errors() {
        assert!("n_x:0:1:0.1".parse::<Axis>().is_err());
        assert!("n_p:0:2:0.1".parse::<Axis>().is_err());
        assert!("1.5".parse::<MPolicy>().is_err());
        assert_eq!("0.25".parse::<MPolicy>().unwrap(), MPolicy::Fixed(0.25));
        assert!("fig-9".parse::<Figure>().is_err());
    }
}
