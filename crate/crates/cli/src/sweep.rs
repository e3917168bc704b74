//! Grid sweeps over the angles and weights of two channels.
//!
//! Arguments are `name=start:stop:steps` for an axis, `name=value` for a
//! fixed parameter and `name=other` to tie one parameter to another (e.g.
//! `theta1=phi1`). Unset angles are 0 and unset weights are 1.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;

use chandisc::{
    classify_channels, compute_params, max_distance_entangled, max_distance_single, Error, Exec,
    ExtremalChannel, QubitChannel, Result,
};
use serde::Serialize;

use crate::output::SCHEMA_VERSION;

pub const NAMES: [&str; 10] = [
    "phi1", "theta1", "phi2", "theta2", "lambda1", "lambda2", "phi1p", "theta1p", "phi2p",
    "theta2p",
];

pub const HEADER: [&str; 12] = [
    "axis1",
    "axis2",
    "alpha",
    "beta",
    "gamma1",
    "gamma2",
    "useful",
    "node",
    "boundary",
    "single_dist",
    "entangled_dist",
    "gap",
];

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: &'static str,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Axis {
    fn value(&self, i: usize) -> f64 {
        let t = i as f64 / (self.steps - 1) as f64;
        // Hit the stop exactly instead of accumulating rounding.
        if i + 1 == self.steps {
            self.stop
        } else {
            self.start + t * (self.stop - self.start)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub axes: Vec<Axis>,
    pub fixed: BTreeMap<&'static str, f64>,
    pub ties: BTreeMap<&'static str, &'static str>,
}

fn spec_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn canonical(name: &str) -> Result<&'static str> {
    NAMES
        .iter()
        .find(|n| **n == name)
        .copied()
        .ok_or_else(|| spec_err(format!("unknown sweep parameter `{name}`")))
}

fn num(tok: &str) -> Result<f64> {
    tok.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| spec_err(format!("`{tok}` is not a finite number")))
}

fn check_value(name: &str, v: f64) -> Result<()> {
    let hi = if name.starts_with("lambda") { 1.0 } else { PI };
    if (0.0..=hi).contains(&v) {
        Ok(())
    } else {
        Err(spec_err(format!("{name} = {v} is outside [0, {hi}]")))
    }
}

impl SweepSpec {
    pub fn parse<S: AsRef<str>>(args: &[S]) -> Result<Self> {
        let mut axes = Vec::new();
        let mut fixed = BTreeMap::new();
        let mut ties = BTreeMap::new();
        let mut seen = Vec::new();
        for arg in args {
            let arg = arg.as_ref();
            let (name, rhs) = arg
                .split_once('=')
                .ok_or_else(|| spec_err(format!("expected `name=...`, got `{arg}`")))?;
            let name = canonical(name.trim())?;
            if seen.contains(&name) {
                return Err(spec_err(format!("`{name}` given twice")));
            }
            seen.push(name);
            let parts: Vec<&str> = rhs.split(':').collect();
            match parts.as_slice() {
                [v] if NAMES.contains(&v.trim()) => {
                    ties.insert(name, canonical(v.trim())?);
                }
                [v] => {
                    let v = num(v)?;
                    check_value(name, v)?;
                    fixed.insert(name, v);
                }
                [a, b, n] => {
                    let steps: usize = n
                        .trim()
                        .parse()
                        .map_err(|_| spec_err(format!("`{n}` is not a step count")))?;
                    if steps < 2 {
                        return Err(spec_err(format!("{name}: steps must be at least 2")));
                    }
                    let (start, stop) = (num(a)?, num(b)?);
                    check_value(name, start)?;
                    check_value(name, stop)?;
                    axes.push(Axis {
                        name,
                        start,
                        stop,
                        steps,
                    });
                }
                _ => return Err(spec_err(format!("cannot read `{arg}`"))),
            }
        }
        if axes.is_empty() || axes.len() > 2 {
            return Err(spec_err(format!("need 1 or 2 axes, got {}", axes.len())));
        }
        for (name, target) in &ties {
            if ties.contains_key(target) {
                return Err(spec_err(format!(
                    "`{name}` is tied to `{target}`, which is itself tied"
                )));
            }
            if name.starts_with("lambda") != target.starts_with("lambda") {
                return Err(spec_err(format!("cannot tie `{name}` to `{target}`")));
            }
        }
        Ok(Self { axes, fixed, ties })
    }

    fn get(&self, point: &[(&'static str, f64)], name: &str) -> f64 {
        let name = self.ties.get(name).copied().unwrap_or(name);
        point
            .iter()
            .find(|(n, _)| *n == name)
            .map(|p| p.1)
            .or_else(|| self.fixed.get(name).copied())
            .unwrap_or(if name.starts_with("lambda") { 1.0 } else { 0.0 })
    }

    fn channel(&self, point: &[(&'static str, f64)], k: u8) -> Result<QubitChannel> {
        let g = |base: &str| self.get(point, &format!("{base}{k}"));
        let gp = |base: &str| self.get(point, &format!("{base}{k}p"));
        QubitChannel::mixture(
            g("lambda"),
            ExtremalChannel::new(g("phi"), g("theta"))?,
            ExtremalChannel::new(gp("phi"), gp("theta"))?,
        )
    }

    /// Grid points in axis1-major order.
    pub fn points(&self) -> Vec<Vec<(&'static str, f64)>> {
        let a = &self.axes[0];
        match self.axes.get(1) {
            None => (0..a.steps).map(|i| vec![(a.name, a.value(i))]).collect(),
            Some(b) => (0..a.steps)
                .flat_map(|i| {
                    (0..b.steps).map(move |j| vec![(a.name, a.value(i)), (b.name, b.value(j))])
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub axis1: f64,
    pub axis2: Option<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub useful: bool,
    pub node: &'static str,
    pub boundary: bool,
    pub single_dist: f64,
    pub entangled_dist: f64,
    pub gap: f64,
}

pub fn rows(spec: &SweepSpec, exec: Exec) -> Result<Vec<Row>> {
    let points = spec.points();
    exec.map(points.len(), |i| {
        let pt = &points[i];
        let c1 = spec.channel(pt, 1)?;
        let c2 = spec.channel(pt, 2)?;
        let p = compute_params(&c1, &c2);
        let verdict = classify_channels(&c1, &c2);
        let single = max_distance_single(&p).value;
        let ent = max_distance_entangled(&p).value;
        Ok(Row {
            axis1: pt[0].1,
            axis2: pt.get(1).map(|x| x.1),
            alpha: p.alpha,
            beta: p.beta,
            gamma1: p.gamma1,
            gamma2: p.gamma2,
            useful: verdict.useful,
            node: verdict.node,
            boundary: verdict.boundary,
            single_dist: single,
            entangled_dist: ent,
            gap: ent - single,
        })
    })
    .into_iter()
    .collect()
}

fn field(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV preceded by one `#` comment line naming the schema and the axes.
pub fn write_csv<W: Write>(spec: &SweepSpec, rows: &[Row], w: W) -> std::io::Result<()> {
    let mut w = w;
    let axes: Vec<&str> = spec.axes.iter().map(|a| a.name).collect();
    writeln!(
        w,
        "# schema_version={SCHEMA_VERSION} axes={}",
        axes.join(",")
    )?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record(HEADER)?;
    for r in rows {
        out.write_record([
            field(r.axis1),
            r.axis2.map(field).unwrap_or_default(),
            field(r.alpha),
            field(r.beta),
            field(r.gamma1),
            field(r.gamma2),
            r.useful.to_string(),
            r.node.to_string(),
            r.boundary.to_string(),
            field(r.single_dist),
            field(r.entangled_dist),
            field(r.gap),
        ])?;
    }
    out.flush()
}
