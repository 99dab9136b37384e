//! Text formats for instances and schedules.
//!
//! Instance files start with `psched 1 <n> <m>` followed by one `<u> <v>`
//! line per precedence edge. Schedule files start with `sched 1 <n> <T>`
//! followed by one `<job> <slot|disc>` line per job in ascending job order.
//! In both, `#` starts a comment and blank lines are ignored.

use std::fmt::Write as _;

use psched_core::{Instance, Schedule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn number<T: std::str::FromStr>(line: usize, field: &str, what: &str) -> Result<T, ParseError> {
    field.parse().map_err(|_| err(line, format!("{what}: {field:?} is not a valid number")))
}

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    magic: &str,
) -> Result<(usize, u64, u64), ParseError> {
    let (line, fields) = lines.next().ok_or_else(|| err(0, format!("missing `{magic} 1 ...` header")))?;
    if fields.len() != 4 || fields[0] != magic {
        return Err(err(line, format!("expected header `{magic} 1 <a> <b>`")));
    }
    if fields[1] != "1" {
        return Err(err(line, format!("unsupported format version {}", fields[1])));
    }
    Ok((line, number(line, fields[2], "n")?, number(line, fields[3], "header")?))
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = content_lines(text);
    let (hline, n, m) = header(&mut lines, "psched")?;
    let n = n as usize;
    if m == 0 {
        return Err(err(hline, "m must be at least 1"));
    }
    let mut edges = Vec::new();
    for (line, fields) in lines {
        if fields.len() != 2 {
            return Err(err(line, "expected `<u> <v>`"));
        }
        let u: usize = number(line, fields[0], "u")?;
        let v: usize = number(line, fields[1], "v")?;
        if u >= n || v >= n {
            return Err(err(line, format!("job id out of range for {n} jobs")));
        }
        edges.push((u, v));
    }
    Instance::new(n, m as usize, &edges).map_err(|e| err(0, e.to_string()))
}

/// Emits the transitive reduction, sorted.
pub fn write_instance(inst: &Instance) -> String {
    let mut out = format!("psched 1 {} {}\n", inst.n(), inst.m());
    let mut pairs = inst.cover_pairs();
    pairs.sort_unstable();
    for (u, v) in pairs {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn parse_schedule(text: &str) -> Result<Schedule, ParseError> {
    let mut lines = content_lines(text);
    let (_, n, horizon) = header(&mut lines, "sched")?;
    let n = n as usize;
    let horizon = u32::try_from(horizon).map_err(|_| err(0, "horizon too large"))?;
    let mut slots = vec![None; n];
    let mut seen = vec![false; n];
    for (line, fields) in lines {
        if fields.len() != 2 {
            return Err(err(line, "expected `<job> <slot|disc>`"));
        }
        let job: usize = number(line, fields[0], "job")?;
        if job >= n {
            return Err(err(line, format!("job id out of range for {n} jobs")));
        }
        if std::mem::replace(&mut seen[job], true) {
            return Err(err(line, format!("job {job} listed twice")));
        }
        if fields[1] != "disc" {
            let slot: u32 = number(line, fields[1], "slot")?;
            if slot == 0 {
                return Err(err(line, "slots start at 1"));
            }
            slots[job] = Some(slot);
        }
    }
    if let Some(job) = seen.iter().position(|s| !s) {
        return Err(err(0, format!("job {job} is missing")));
    }
    Ok(Schedule::new(horizon, slots))
}

pub fn write_schedule(sched: &Schedule) -> String {
    let mut out = format!("sched 1 {} {}\n", sched.n(), sched.horizon());
    for (j, slot) in sched.slots().iter().enumerate() {
        match slot {
            Some(t) => writeln!(out, "{j} {t}").unwrap(),
            None => writeln!(out, "{j} disc").unwrap(),
        }
    }
    out
}
