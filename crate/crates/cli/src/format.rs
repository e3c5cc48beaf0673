//! Number formatting for reports and CSV series.

use std::fmt::Write;

use cepalg::scale::{Evidence, Verdict};
use cepalg::SeminormNet;

/// `x` to 6 significant digits, `%g` style.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("`{:e}` always has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// `lambda,value` with one row per schedule point; values are the shortest
/// decimals that round-trip.
pub fn csv(net: &SeminormNet) -> String {
    let mut out = String::from("lambda,value\n");
    for (l, v) in net.schedule().iter().zip(net.values()) {
        writeln!(out, "{l:?},{v:?}").unwrap();
    }
    out
}

fn evidence(e: Evidence) -> &'static str {
    match e {
        Evidence::Symbolic => "symbolic",
        Evidence::Numeric => "numeric",
    }
}

/// One-line rendering of a verdict; gauge names render witnesses.
pub fn verdict(v: &Verdict<f64>, names: &[String]) -> String {
    match v {
        Verdict::Holds(c) => {
            let mut s = String::from("holds");
            if let Some(d) = c.degree {
                write!(s, " to degree {d}").unwrap();
            }
            if let Some(w) = &c.witness {
                write!(s, ", witness {}", w.render(names)).unwrap();
            }
            write!(s, ", from lambda <= {} ({})", sig6(c.threshold), evidence(c.evidence)).unwrap();
            s
        }
        Verdict::Fails(r) => {
            let mut s = String::from("fails");
            if let Some(p) = r.power {
                write!(s, " at n={p}").unwrap();
            }
            let points: Vec<String> = r.counterexamples.iter().take(3).map(|x| sig6(*x)).collect();
            let more = if r.counterexamples.len() > 3 { ", ..." } else { "" };
            write!(s, ", lambda = {}{more} ({})", points.join(", "), evidence(r.evidence)).unwrap();
            s
        }
        Verdict::Unknown(b) => format!("unknown at degree {}: {}", b.degree, b.reason),
    }
}
