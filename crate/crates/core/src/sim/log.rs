//! Per-step trajectory log and its CSV representation.
//!
//! `trajectory.csv` holds everything that is a deterministic function of the
//! scenario and seed. Controller wall-clock time lives in a separate
//! `timing.csv` (columns `t_s,controller_ns`) so that two runs of the same
//! scenario produce byte-identical trajectory files.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::math::Vec3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObstacleLog {
    pub h: f64,
    pub h_dot: f64,
    pub alpha: f64,
    /// `aᵀτ_applied − b`; negative when the barrier row is violated.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogRow {
    pub t: f64,
    pub eta: Vec3,
    pub nu: Vec3,
    pub e_p: Vec3,
    pub s: Vec3,
    pub tau_smc: Vec3,
    pub tau_safe: Vec3,
    pub tau_applied: Vec3,
    pub delta_u: Vec3,
    pub d_total: Vec3,
    pub d_wind: Vec3,
    pub d_wave: Vec3,
    pub d_current: Vec3,
    pub d_clipped: bool,
    pub obstacles: Vec<ObstacleLog>,
    pub modified: bool,
    pub sweeps: usize,
    pub max_residual: f64,
    pub feasible: bool,
    pub thruster_mag: [f64; 3],
    pub thruster_azimuth: [f64; 3],
    pub thruster_saturated: bool,
    /// Wall-clock time spent in the control pipeline for this step.
    pub controller_ns: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrajectoryLog {
    pub obstacle_count: usize,
    pub rows: Vec<LogRow>,
}

const VEC_COLUMNS: [(&str, [&str; 3]); 13] = [
    ("eta", ["x_m", "y_m", "psi_rad"]),
    ("nu", ["u_mps", "v_mps", "r_radps"]),
    ("ep", ["x_m", "y_m", "psi_rad"]),
    ("s", ["x", "y", "n"]),
    ("tau_smc", ["x_N", "y_N", "n_Nm"]),
    ("tau_safe", ["x_N", "y_N", "n_Nm"]),
    ("tau_applied", ["x_N", "y_N", "n_Nm"]),
    ("du", ["x_N", "y_N", "n_Nm"]),
    ("d_total", ["x_N", "y_N", "n_Nm"]),
    ("d_wind", ["x_N", "y_N", "n_Nm"]),
    ("d_wave", ["x_N", "y_N", "n_Nm"]),
    ("d_curr", ["x_N", "y_N", "n_Nm"]),
    ("", ["", "", ""]),
];

impl TrajectoryLog {
    pub fn new(obstacle_count: usize) -> Self {
        TrajectoryLog {
            obstacle_count,
            rows: Vec::new(),
        }
    }

    pub fn header(obstacle_count: usize) -> Vec<String> {
        let mut cols = vec!["t_s".to_string()];
        for (prefix, names) in VEC_COLUMNS.iter().filter(|(p, _)| !p.is_empty()) {
            for n in names {
                cols.push(format!("{prefix}_{n}"));
            }
            if *prefix == "s" {
                cols.push("s_norm".into());
            }
            if *prefix == "du" {
                cols.push("du_norm".into());
            }
        }
        cols.push("d_clipped".into());
        for j in 0..obstacle_count {
            cols.push(format!("h{j}_m2"));
            cols.push(format!("hdot{j}_m2ps"));
            cols.push(format!("alpha{j}_1ps"));
            cols.push(format!("resid{j}_m2ps2"));
        }
        cols.extend(
            [
                "filter_modified",
                "filter_sweeps",
                "filter_max_residual_m2ps2",
                "filter_feasible",
            ]
            .map(String::from),
        );
        for i in 0..3 {
            cols.push(format!("thr{i}_mag_N"));
            cols.push(format!("thr{i}_az_rad"));
        }
        cols.push("thr_saturated".into());
        cols
    }

    fn row_fields(row: &LogRow) -> Vec<String> {
        let f = |x: f64| format!("{x}");
        let b = |x: bool| if x { "1".to_string() } else { "0".to_string() };
        let mut out = vec![f(row.t)];
        let vecs = [
            &row.eta,
            &row.nu,
            &row.e_p,
            &row.s,
            &row.tau_smc,
            &row.tau_safe,
            &row.tau_applied,
            &row.delta_u,
            &row.d_total,
            &row.d_wind,
            &row.d_wave,
            &row.d_current,
        ];
        for (k, v) in vecs.iter().enumerate() {
            out.extend(v.iter().map(|x| f(*x)));
            if k == 3 || k == 7 {
                out.push(f(v.norm()));
            }
        }
        out.push(b(row.d_clipped));
        for o in &row.obstacles {
            out.extend([f(o.h), f(o.h_dot), f(o.alpha), f(o.residual)]);
        }
        out.push(b(row.modified));
        out.push(row.sweeps.to_string());
        out.push(f(row.max_residual));
        out.push(b(row.feasible));
        for i in 0..3 {
            out.push(f(row.thruster_mag[i]));
            out.push(f(row.thruster_azimuth[i]));
        }
        out.push(b(row.thruster_saturated));
        out
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(Self::header(self.obstacle_count))?;
        for row in &self.rows {
            w.write_record(Self::row_fields(row))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_timing_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t_s", "controller_ns"])?;
        for row in &self.rows {
            w.write_record([format!("{}", row.t), row.controller_ns.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Log(e.to_string()))
    }

    /// Writes `trajectory.csv` and `timing.csv` into `dir`.
    pub fn save(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        self.write_csv(std::fs::File::create(dir.join("trajectory.csv"))?)?;
        self.write_timing_csv(std::fs::File::create(dir.join("timing.csv"))?)?;
        Ok(())
    }

    /// Reads a log written by [`TrajectoryLog::save`].
    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let mut log = Self::read_csv(std::fs::File::open(dir.join("trajectory.csv"))?)?;
        let timing = std::fs::File::open(dir.join("timing.csv"))?;
        let mut r = csv::Reader::from_reader(timing);
        for (row, rec) in log.rows.iter_mut().zip(r.records()) {
            let rec = rec?;
            row.controller_ns = rec
                .get(1)
                .ok_or_else(|| Error::Log("timing row too short".into()))?
                .parse()
                .map_err(|e| Error::Log(format!("controller_ns: {e}")))?;
        }
        Ok(log)
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let header = r.headers()?.clone();
        let obstacle_count = header.iter().filter(|h| h.starts_with('h') && h.ends_with("_m2")).count();
        if header.iter().collect::<Vec<_>>() != Self::header(obstacle_count) {
            return Err(Error::Log("unexpected header".into()));
        }
        let mut log = TrajectoryLog::new(obstacle_count);
        for rec in r.records() {
            let rec = rec?;
            let mut it = rec.iter();
            let mut next = || it.next().ok_or_else(|| Error::Log("row too short".into()));
            let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Log(format!("{s}: {e}")));
            let flag = |s: &str| match s {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(Error::Log(format!("bad flag {s}"))),
            };
            let t = num(next()?)?;
            let mut vecs = [Vec3::zeros(); 12];
            for (k, v) in vecs.iter_mut().enumerate() {
                for c in 0..3 {
                    v[c] = num(next()?)?;
                }
                if k == 3 || k == 7 {
                    next()?;
                }
            }
            let d_clipped = flag(next()?)?;
            let mut obstacles = Vec::with_capacity(obstacle_count);
            for _ in 0..obstacle_count {
                obstacles.push(ObstacleLog {
                    h: num(next()?)?,
                    h_dot: num(next()?)?,
                    alpha: num(next()?)?,
                    residual: num(next()?)?,
                });
            }
            let modified = flag(next()?)?;
            let sweeps = next()?
                .parse()
                .map_err(|e| Error::Log(format!("filter_sweeps: {e}")))?;
            let max_residual = num(next()?)?;
            let feasible = flag(next()?)?;
            let mut thruster_mag = [0.0; 3];
            let mut thruster_azimuth = [0.0; 3];
            for i in 0..3 {
                thruster_mag[i] = num(next()?)?;
                thruster_azimuth[i] = num(next()?)?;
            }
            let thruster_saturated = flag(next()?)?;
            let [eta, nu, e_p, s, tau_smc, tau_safe, tau_applied, delta_u, d_total, d_wind, d_wave, d_current] = vecs;
            log.rows.push(LogRow {
                t,
                eta,
                nu,
                e_p,
                s,
                tau_smc,
                tau_safe,
                tau_applied,
                delta_u,
                d_total,
                d_wind,
                d_wave,
                d_current,
                d_clipped,
                obstacles,
                modified,
                sweeps,
                max_residual,
                feasible,
                thruster_mag,
                thruster_azimuth,
                thruster_saturated,
                controller_ns: 0,
            });
        }
        Ok(log)
    }
}
