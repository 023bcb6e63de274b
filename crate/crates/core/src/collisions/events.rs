//! Structured run events. The text form reproduces the classic run log line
//! for line; the JSON report is assembled from the same events.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Value};

pub const COLLISION_CSV_HEADER: &str = "attempt,collision,D,D_min,g";

#[derive(Debug, Clone, PartialEq)]
pub enum Event {
    Attempt { attempt: usize, a: BigUint },
    Sampling { word_length: usize, max_samples: usize, stable_hits: usize },
    /// gcd(a, N) > 1 at the random draw.
    GcdShortcut { d: BigUint },
    /// Relation a^(2^s q) ≡ 1 read off a repetition in the doubling multiset.
    EarlyRelation { s: u32, q: BigUint },
    Collision { index: usize, d: BigInt, d_min: BigUint, g: BigUint },
    Aggressive { index: usize, d: BigInt, d_min: BigUint, d1: BigUint, d2: BigUint },
    Stabilized { g: BigUint },
    ReducedOrder { r: BigUint },
    NoStabilization,
    OddOrder { r_b: BigUint },
    LiftedOrder { r: BigUint },
    TrivialRoot { r: BigUint },
    Success { d1: BigUint, d2: BigUint },
    Final { n: BigUint, p: BigUint, q: BigUint },
    Exhausted { n: BigUint, attempts: usize },
    TotalTime { seconds: f64 },
}

impl Event {
    /// Text lines, including any blank separator that precedes the event.
    pub fn lines(&self) -> Vec<String> {
        match self {
            Event::Attempt { attempt, a } => {
                let line = format!("[attempt {attempt}] trying a = {a}");
                if *attempt > 1 {
                    vec![String::new(), line]
                } else {
                    vec![line]
                }
            }
            Event::Sampling {
                word_length,
                max_samples,
                stable_hits,
            } => vec![format!(
                "  sampling words of length L = {word_length}, max_samples = {max_samples}, stable_hits = {stable_hits}"
            )],
            Event::GcdShortcut { d } => vec![format!("  gcd(a, N) = {d}")],
            Event::EarlyRelation { s, q } => {
                vec![format!("  repetition in S(a): a^(2^{s} * {q}) = 1")]
            }
            Event::Collision { index, d_min, g, .. } => {
                vec![format!("[collision #{index:>3}]  D_min = {d_min}   running_gcd = {g}")]
            }
            Event::Aggressive { index, d_min, d1, d2, .. } => vec![format!(
                "[collision #{index:>3}]  D_min = {d_min}   AGGRESSIVE ONE-COLLISION FACTOR: {d1} * {d2}"
            )],
            Event::Stabilized { g } => vec![format!("  stabilized gcd = {g}")],
            Event::ReducedOrder { r } => vec![format!("  reduced order r = {r}")],
            Event::NoStabilization => {
                vec!["  no stabilized gcd from loops in this attempt (try another a).".to_string()]
            }
            Event::OddOrder { r_b } => vec![format!("  order of b = a^(2^M): r_b = {r_b}")],
            Event::LiftedOrder { r } => vec![format!("  lifted order r = {r}")],
            Event::TrivialRoot { r } => {
                vec![format!("  order r = {r} gives no nontrivial square root (try another a).")]
            }
            Event::Success { d1, d2 } => vec![String::new(), format!("SUCCESS: N = {d1} * {d2}")],
            Event::Final { n, p, q } => vec![String::new(), format!("FINAL: {n} = {p} * {q}")],
            Event::Exhausted { n, attempts } => {
                vec![String::new(), format!("FAILED: no factor of {n} after {attempts} attempts")]
            }
            Event::TotalTime { seconds } => vec![format!("TOTAL TIME: {}", format_elapsed(*seconds))],
        }
    }
}

/// `3.120 s  (0:00:03)`
pub fn format_elapsed(seconds: f64) -> String {
    let whole = seconds.max(0.0).round() as u64;
    format!(
        "{seconds:.3} s  ({}:{:02}:{:02})",
        whole / 3600,
        (whole / 60) % 60,
        whole % 60
    )
}

type Echo<'a> = Box<dyn FnMut(&str) + 'a>;

/// Ordered event record, optionally echoing each text line as it happens.
#[derive(Default)]
pub struct EventLog<'a> {
    events: Vec<Event>,
    echo: Option<Echo<'a>>,
    timing: bool,
}

impl fmt::Debug for EventLog<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EventLog")
            .field("events", &self.events)
            .field("timing", &self.timing)
            .finish()
    }
}

impl<'a> EventLog<'a> {
    /// A log whose text omits the timing line.
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_timing(mut self, timing: bool) -> Self {
        self.timing = timing;
        self
    }

    pub fn with_echo(mut self, echo: impl FnMut(&str) + 'a) -> Self {
        self.echo = Some(Box::new(echo));
        self
    }

    pub fn timing(&self) -> bool {
        self.timing
    }

    pub fn push(&mut self, event: Event) {
        let show = self.timing || !matches!(event, Event::TotalTime { .. });
        if let (Some(echo), true) = (self.echo.as_mut(), show) {
            for line in event.lines() {
                echo(&line);
            }
        }
        self.events.push(event);
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn text_lines(&self) -> Vec<String> {
        self.events
            .iter()
            .filter(|e| self.timing || !matches!(e, Event::TotalTime { .. }))
            .flat_map(Event::lines)
            .collect()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for line in self.text_lines() {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// One CSV row per certificate: `attempt,collision,D,D_min,g`. The `g`
    /// column is empty for aggressive certificates, which skip the running gcd.
    pub fn write_collision_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{COLLISION_CSV_HEADER}")?;
        let mut attempt = 0;
        for event in &self.events {
            match event {
                Event::Attempt { attempt: k, .. } => attempt = *k,
                Event::Collision { index, d, d_min, g } => writeln!(out, "{attempt},{index},{d},{d_min},{g}")?,
                Event::Aggressive { index, d, d_min, .. } => writeln!(out, "{attempt},{index},{d},{d_min},")?,
                _ => {}
            }
        }
        Ok(())
    }

    /// Per-attempt JSON report. Integers are decimal strings since they can
    /// exceed 64 bits.
    pub fn to_json(&self, n: &BigUint) -> Value {
        let mut attempts: Vec<Value> = Vec::new();
        let mut factors = Value::Null;
        let mut elapsed = Value::Null;
        for event in &self.events {
            match event {
                Event::Attempt { attempt, a } => attempts.push(json!({
                    "attempt": attempt,
                    "a": a.to_string(),
                    "collisions": [],
                    "r": null,
                    "factors": null,
                })),
                Event::Collision { d, d_min, g, .. } => {
                    if let Some(cur) = attempts.last_mut() {
                        push_collision(cur, d, d_min, Some(g));
                    }
                }
                Event::Aggressive { d, d_min, d1, d2, .. } => {
                    if let Some(cur) = attempts.last_mut() {
                        push_collision(cur, d, d_min, None);
                        cur["factors"] = json!([d1.to_string(), d2.to_string()]);
                    }
                }
                Event::ReducedOrder { r } | Event::LiftedOrder { r } => {
                    if let Some(cur) = attempts.last_mut() {
                        cur["r"] = json!(r.to_string());
                    }
                }
                Event::GcdShortcut { d } => {
                    if let Some(cur) = attempts.last_mut() {
                        let other = n / d;
                        cur["factors"] = json!([d.to_string(), other.to_string()]);
                    }
                }
                Event::Success { d1, d2 } => {
                    if let Some(cur) = attempts.last_mut() {
                        cur["factors"] = json!([d1.to_string(), d2.to_string()]);
                    }
                }
                Event::Final { p, q, .. } => factors = json!([p.to_string(), q.to_string()]),
                Event::TotalTime { seconds } if self.timing => elapsed = json!(seconds),
                _ => {}
            }
        }
        json!({
            "n": n.to_string(),
            "attempts": attempts,
            "factors": factors,
            "elapsed_s": elapsed,
        })
    }
}

fn push_collision(attempt: &mut Value, d: &BigInt, d_min: &BigUint, g: Option<&BigUint>) {
    if let Some(list) = attempt["collisions"].as_array_mut() {
        list.push(json!({
            "D": d.to_string(),
            "D_min": d_min.to_string(),
            "g": g.map(|g| g.to_string()),
        }));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn collision_line_layout() {
        let e = Event::Collision {
            index: 1,
            d: BigInt::from(314919552),
            d_min: big(314919552),
            g: big(314919552),
        };
        assert_eq!(e.lines(), vec!["[collision #  1]  D_min = 314919552   running_gcd = 314919552"]);
        let e = Event::Collision {
            index: 10,
            d: BigInt::from(-9749105280i64),
            d_min: big(9749105280),
            g: big(6700416),
        };
        assert_eq!(e.lines(), vec!["[collision # 10]  D_min = 9749105280   running_gcd = 6700416"]);
    }

    #[test]
    fn timing_format() {
        assert_eq!(format_elapsed(3.12), "3.120 s  (0:00:03)");
        assert_eq!(format_elapsed(3132.641), "3132.641 s  (0:52:13)");
        assert_eq!(format_elapsed(11.734), "11.734 s  (0:00:12)");
    }

    #[test]
    fn timing_line_is_optional() {
        let mut log = EventLog::new();
        log.push(Event::Final {
            n: big(15),
            p: big(3),
            q: big(5),
        });
        log.push(Event::TotalTime { seconds: 1.0 });
        assert_eq!(log.render_text(), "\nFINAL: 15 = 3 * 5\n");
        let json = log.to_json(&big(15));
        assert_eq!(json["elapsed_s"], Value::Null);
        assert_eq!(json["factors"], json!(["3", "5"]));
    }
}
