use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CertificateError;
use crate::Statistics;

/// Width of the value bins certificates are rounded to.
pub const DEFAULT_BIN_WIDTH: f64 = 1e-10;
/// Default elementwise tolerance for [`super::compare`].
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    /// Entry magnitudes of the evolution operator.
    L0,
    /// Position probabilities summed over the coin (or one particle).
    L1,
    /// `L1` values accumulated over times `1..=T`.
    L2,
    /// Two-boson `L2` started from symmetrised edge states.
    #[serde(rename = "L2tilde")]
    L2Tilde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Walk {
    #[serde(rename = "DT")]
    Discrete,
    #[serde(rename = "CT")]
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkTime {
    /// Discrete steps: the time `t` for `L0`/`L1`, the horizon `T` for `L2`.
    Steps(u32),
    /// A single continuous time.
    Continuous(f64),
    /// Continuous times `dt, 2·dt, ..., steps·dt`.
    Grid { steps: u32, dt: f64 },
}

/// What a certificate was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateSpec {
    pub kind: Kind,
    pub walk: Walk,
    pub particles: usize,
    pub statistics: Statistics,
    pub time: WalkTime,
    pub bin_width: f64,
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, CertificateError> {
    Err(CertificateError::InvalidSpec(msg.into()))
}

impl CertificateSpec {
    /// Discrete-time spec with the default statistics for `kind`.
    pub fn dt(kind: Kind, particles: usize, steps: u32) -> Result<Self, CertificateError> {
        let statistics = if kind == Kind::L2Tilde { Statistics::Boson } else { Statistics::Distinguishable };
        let spec = CertificateSpec {
            kind,
            walk: Walk::Discrete,
            particles,
            statistics,
            time: WalkTime::Steps(steps),
            bin_width: DEFAULT_BIN_WIDTH,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Continuous-time spec.
    pub fn ct(kind: Kind, particles: usize, statistics: Statistics, time: WalkTime) -> Result<Self, CertificateError> {
        let spec =
            CertificateSpec { kind, walk: Walk::Continuous, particles, statistics, time, bin_width: DEFAULT_BIN_WIDTH };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_bin_width(mut self, bin_width: f64) -> Result<Self, CertificateError> {
        self.bin_width = bin_width;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), CertificateError> {
        if !(self.bin_width > 0.0 && self.bin_width.is_finite()) {
            return invalid(format!("bin width must be positive, got {}", self.bin_width));
        }
        if self.particles == 0 {
            return invalid("at least one particle is required");
        }
        match self.walk {
            Walk::Discrete => {
                let WalkTime::Steps(t) = self.time else {
                    return invalid("discrete walks take an integer step count");
                };
                match self.kind {
                    Kind::L2Tilde => {
                        if self.particles != 2 || self.statistics != Statistics::Boson {
                            return invalid("L2tilde is defined for two bosons");
                        }
                    }
                    _ => {
                        if self.particles > 2 {
                            return invalid("discrete walks support one or two particles");
                        }
                        if self.statistics != Statistics::Distinguishable {
                            return invalid("discrete L0/L1/L2 use unsymmetrised (distinguishable) product states");
                        }
                    }
                }
                if t == 0 && self.kind != Kind::L0 {
                    return invalid("probability certificates need at least one step");
                }
            }
            Walk::Continuous => {
                if self.statistics == Statistics::Distinguishable {
                    return invalid("continuous walks use boson or fermion statistics");
                }
                match (self.kind, self.time) {
                    (Kind::L2Tilde, _) => return invalid("L2tilde is defined for discrete walks only"),
                    (Kind::L0 | Kind::L1, WalkTime::Continuous(t)) if t.is_finite() => {}
                    (Kind::L0 | Kind::L1, _) => return invalid("continuous L0/L1 take a single finite time t"),
                    (Kind::L2, WalkTime::Grid { steps, dt }) if steps >= 1 && dt > 0.0 && dt.is_finite() => {}
                    (Kind::L2, _) => return invalid("continuous L2 takes T >= 1 and dt > 0"),
                }
            }
        }
        Ok(())
    }

    /// Bin index of a value.
    #[inline]
    pub fn bin(&self, v: f64) -> i64 {
        (v / self.bin_width).round() as i64
    }

    /// Largest value a probability-type entry can take (the number of time
    /// points summed), or `None` for `L0`.
    pub fn probability_bound(&self) -> Option<f64> {
        match (self.kind, self.time) {
            (Kind::L0, _) => None,
            (Kind::L1, _) => Some(1.0),
            (_, WalkTime::Steps(t)) => Some(t as f64),
            (_, WalkTime::Grid { steps, .. }) => Some(steps as f64),
            (_, WalkTime::Continuous(_)) => Some(1.0),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::L0 => "L0",
            Kind::L1 => "L1",
            Kind::L2 => "L2",
            Kind::L2Tilde => "L2tilde",
        })
    }
}

fn statistics_name(s: Statistics) -> &'static str {
    match s {
        Statistics::Boson => "boson",
        Statistics::Fermion => "fermion",
        Statistics::Distinguishable => "distinguishable",
    }
}

/// Compact form `KIND,WALK,P[,stats][,t=..|T=..][,dt=..]`, for example
/// `L1,DT,1,t=3`, `L2tilde,DT,2,T=32` or `L2,CT,2,boson,T=3,dt=0.5`.
impl fmt::Display for CertificateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let walk = match self.walk {
            Walk::Discrete => "DT",
            Walk::Continuous => "CT",
        };
        write!(f, "{},{},{}", self.kind, walk, self.particles)?;
        if self.walk == Walk::Continuous {
            write!(f, ",{}", statistics_name(self.statistics))?;
        }
        match self.time {
            WalkTime::Steps(t) if matches!(self.kind, Kind::L0 | Kind::L1) => write!(f, ",t={t}")?,
            WalkTime::Steps(t) => write!(f, ",T={t}")?,
            WalkTime::Continuous(t) => write!(f, ",t={t}")?,
            WalkTime::Grid { steps, dt } => write!(f, ",T={steps},dt={dt}")?,
        }
        if self.bin_width != DEFAULT_BIN_WIDTH {
            write!(f, ",bin={}", self.bin_width)?;
        }
        Ok(())
    }
}

impl FromStr for CertificateSpec {
    type Err = CertificateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() < 3 {
            return invalid(format!("'{s}': expected KIND,WALK,P[,stats][,t=..|T=..][,dt=..]"));
        }
        let kind = match parts[0].to_ascii_lowercase().as_str() {
            "l0" => Kind::L0,
            "l1" => Kind::L1,
            "l2" => Kind::L2,
            "l2tilde" | "l2~" => Kind::L2Tilde,
            other => return invalid(format!("unknown certificate kind '{other}'")),
        };
        let walk = match parts[1].to_ascii_uppercase().as_str() {
            "DT" => Walk::Discrete,
            "CT" => Walk::Continuous,
            other => return invalid(format!("unknown walk '{other}' (DT or CT)")),
        };
        let particles: usize = parts[2].parse().or_else(|_| invalid(format!("bad particle count '{}'", parts[2])))?;
        let mut statistics = None;
        let mut time: Option<f64> = None;
        let mut dt: Option<f64> = None;
        let mut bin_width = DEFAULT_BIN_WIDTH;
        for part in &parts[3..] {
            let parse_num = |v: &str| v.parse::<f64>().or_else(|_| invalid(format!("bad number in '{part}'")));
            match part.split_once('=') {
                Some(("t" | "T", v)) => time = Some(parse_num(v)?),
                Some(("dt", v)) => dt = Some(parse_num(v)?),
                Some(("bin", v)) => bin_width = parse_num(v)?,
                Some(_) => return invalid(format!("unknown option '{part}'")),
                None => {
                    statistics = Some(match part.to_ascii_lowercase().as_str() {
                        "boson" | "bosons" => Statistics::Boson,
                        "fermion" | "fermions" => Statistics::Fermion,
                        "distinguishable" => Statistics::Distinguishable,
                        other => return invalid(format!("unknown statistics '{other}'")),
                    })
                }
            }
        }
        let time = time.ok_or_else(|| CertificateError::InvalidSpec(format!("'{s}': missing t= or T=")))?;
        let spec = match walk {
            Walk::Discrete => {
                if dt.is_some() {
                    return invalid("dt= applies to continuous walks only");
                }
                if time < 0.0 || time.fract() != 0.0 || time > u32::MAX as f64 {
                    return invalid(format!("discrete time must be a nonnegative integer, got {time}"));
                }
                let default = if kind == Kind::L2Tilde { Statistics::Boson } else { Statistics::Distinguishable };
                CertificateSpec {
                    kind,
                    walk,
                    particles,
                    statistics: statistics.unwrap_or(default),
                    time: WalkTime::Steps(time as u32),
                    bin_width,
                }
            }
            Walk::Continuous => {
                let t = match kind {
                    Kind::L2 => {
                        if time < 1.0 || time.fract() != 0.0 {
                            return invalid(format!("T must be a positive integer, got {time}"));
                        }
                        WalkTime::Grid { steps: time as u32, dt: dt.unwrap_or(1.0) }
                    }
                    _ => {
                        if dt.is_some() {
                            return invalid("dt= applies to continuous L2 only");
                        }
                        WalkTime::Continuous(time)
                    }
                };
                CertificateSpec {
                    kind,
                    walk,
                    particles,
                    statistics: statistics.unwrap_or(Statistics::Boson),
                    time: t,
                    bin_width,
                }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}
