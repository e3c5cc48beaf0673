//! Task execution and report assembly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use cepalg::classifier::{Classifier, ClassificationReport, Entry, Hypothesis, Overall, TheoremReport};
use cepalg::scale::{dominates, normalize, Operand, SampledNet, Verdict};
use cepalg::seminorm::{alpha_label, Grid};
use cepalg::{Family, Region, SeminormNet};

use crate::format::{csv, sig6, verdict};
use crate::scenario::{Args, Kind, NamedBox, Outcome, Scenario, Task};

#[derive(Clone, Debug)]
pub struct TaskReport {
    pub name: String,
    pub kind: Kind,
    /// Outcome of the check itself.
    pub raw: Outcome,
    pub expect: Option<Outcome>,
    /// `raw` judged against `expect`; equal to `raw` when nothing is expected.
    pub outcome: Outcome,
    pub detail: String,
    pub lines: Vec<String>,
    /// CSV file names, relative to the CSV directory.
    pub csv_files: Vec<String>,
    pub elapsed: Duration,
}

impl TaskReport {
    /// `key=value` fields on one line; `detail` is quoted.
    pub fn summary(&self) -> String {
        let expect = self.expect.map_or_else(|| "-".to_string(), |e| e.to_string());
        format!(
            "summary task={} kind={} outcome={} raw={} expect={} detail=\"{}\"",
            self.name,
            self.kind,
            self.outcome,
            self.raw,
            expect,
            self.detail.replace('"', "'")
        )
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub header: Vec<String>,
    pub tasks: Vec<TaskReport>,
}

impl Report {
    pub fn count(&self, outcome: Outcome) -> usize {
        self.tasks.iter().filter(|t| t.outcome == outcome).count()
    }

    /// 0 when every task passes, 1 on any failure, 2 for unknowns only.
    pub fn exit_code(&self) -> i32 {
        if self.count(Outcome::Fail) > 0 {
            1
        } else if self.count(Outcome::Unknown) > 0 {
            2
        } else {
            0
        }
    }

    fn write(&self, timing: bool) -> String {
        let mut out = String::new();
        for h in &self.header {
            writeln!(out, "{h}").unwrap();
        }
        for (i, t) in self.tasks.iter().enumerate() {
            writeln!(out, "\n[{}] {} {}", i + 1, t.kind, t.name).unwrap();
            for l in &t.lines {
                writeln!(out, "    {l}").unwrap();
            }
            for f in &t.csv_files {
                writeln!(out, "    csv {f}").unwrap();
            }
            writeln!(out, "    outcome {}: {}", t.outcome, t.detail).unwrap();
            if timing {
                writeln!(out, "    time {:.3} s", t.elapsed.as_secs_f64()).unwrap();
            }
            writeln!(out, "{}", t.summary()).unwrap();
        }
        writeln!(
            out,
            "\ntotals pass={} fail={} unknown={}",
            self.count(Outcome::Pass),
            self.count(Outcome::Fail),
            self.count(Outcome::Unknown)
        )
        .unwrap();
        out
    }

    /// Deterministic part of the report: everything except timing lines.
    pub fn body(&self) -> String {
        self.write(false)
    }

    pub fn render(&self) -> String {
        self.write(true)
    }
}

struct Body {
    raw: Outcome,
    detail: String,
    lines: Vec<String>,
    /// File stem and series.
    nets: Vec<(String, SeminormNet)>,
}

/// Runs every task in declaration order. A task that errors is reported as
/// failed; the remaining tasks still run.
pub fn run_scenario(s: &Scenario) -> Report {
    let family = s.scale.family().expect("scale is validated on load");
    let header = vec![
        format!("scenario {}", s.source.display()),
        format!(
            "scale gauges [{}], lambda_j = {}*{}^j for j = 0..={}, tail {}",
            s.scale.gauges.join(", "),
            sig6(s.scale.start),
            sig6(s.scale.ratio),
            s.scale.count - 1,
            s.scale.tail
        ),
        format!(
            "defaults degree {}, grid {}, order {}",
            s.defaults.degree, s.defaults.grid, s.defaults.order
        ),
    ];
    let tasks = s.tasks.iter().map(|t| run_task(s, &family, t)).collect();
    Report { header, tasks }
}

fn run_task(s: &Scenario, family: &Family, task: &Task) -> TaskReport {
    let start = Instant::now();
    let body = execute(s, family, task).unwrap_or_else(|e| Body {
        raw: Outcome::Fail,
        detail: format!("error: {e}"),
        lines: Vec::new(),
        nets: Vec::new(),
    });
    let mut report = TaskReport {
        name: task.name.clone(),
        kind: task.kind,
        raw: body.raw,
        expect: task.expect,
        outcome: body.raw,
        detail: body.detail,
        lines: body.lines,
        csv_files: Vec::new(),
        elapsed: Duration::ZERO,
    };
    if task.csv && !body.nets.is_empty() {
        match write_csvs(&s.csv_dir, &task.name, &body.nets) {
            Ok(files) => report.csv_files = files,
            Err(e) => {
                report.raw = Outcome::Fail;
                report.detail = format!("{}; csv error: {e}", report.detail);
            }
        }
    }
    report.outcome = match report.expect {
        Some(e) if report.raw == e => Outcome::Pass,
        Some(_) => Outcome::Fail,
        None => report.raw,
    };
    if let Some(e) = report.expect {
        report.lines.push(format!("expected {e}, got {}", report.raw));
    }
    report.elapsed = start.elapsed();
    report
}

fn write_csvs(dir: &Path, task: &str, nets: &[(String, SeminormNet)]) -> std::io::Result<Vec<String>> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::with_capacity(nets.len());
    for (stem, net) in nets {
        let file = format!("{task}_{stem}.csv");
        fs::write(dir.join(&file), csv(net))?;
        files.push(file);
    }
    Ok(files)
}

/// Declared name of a region, with `-fat` for a fattened declared box.
fn region_name(region: &Region, boxes: &[NamedBox]) -> String {
    if let Some(b) = boxes.iter().find(|b| &b.region == region) {
        return b.name.clone();
    }
    if let Some(b) = boxes.iter().find(|b| &b.region.fattened(0.5) == region) {
        return format!("{}-fat", b.name);
    }
    region.to_string()
}

struct Context<'a> {
    names: Vec<String>,
    tail: usize,
    boxes: &'a [NamedBox],
}

impl Context<'_> {
    fn entry_line(&self, e: &Entry<f64>) -> String {
        let mut s = format!(
            "P[{}, {}] at lambda_min = {}: ring {}",
            region_name(e.region(), self.boxes),
            e.order(),
            sig6(*e.net.values().last().unwrap()),
            verdict(&e.ring, &self.names)
        );
        if let Some(v) = &e.ideal {
            write!(s, "; ideal {}", verdict(v, &self.names)).unwrap();
        }
        s
    }

    fn stem(&self, e: &Entry<f64>) -> String {
        format!("{}_P{}", region_name(e.region(), self.boxes), e.order())
    }

    fn entries(&self, report: &ClassificationReport<f64>, lines: &mut Vec<String>, nets: &mut Vec<(String, SeminormNet)>) {
        for e in &report.entries {
            lines.push(self.entry_line(e));
            nets.push((self.stem(e), e.net.clone()));
        }
    }
}

fn classification_outcome(overall: Overall) -> Outcome {
    match overall {
        Overall::Moderate | Overall::Negligible => Outcome::Pass,
        Overall::Refuted { .. } => Outcome::Fail,
        Overall::NotCertified { .. } => Outcome::Unknown,
    }
}

fn verdict_outcome<T>(v: &Verdict<T>) -> Outcome {
    match v {
        Verdict::Holds(_) => Outcome::Pass,
        Verdict::Fails(_) => Outcome::Fail,
        Verdict::Unknown(_) => Outcome::Unknown,
    }
}

fn execute(s: &Scenario, family: &Family, task: &Task) -> Result<Body, String> {
    let degree = task.degree.unwrap_or(s.defaults.degree);
    let order = task.order.unwrap_or(s.defaults.order);
    let grid = Grid::new(task.grid.unwrap_or(s.defaults.grid)).map_err(|e| e.to_string())?;
    let classifier = Classifier::new(family, degree).with_grid(grid);
    let ctx = Context {
        names: family.gauge_names(),
        tail: family.tail_len(),
        boxes: &s.boxes,
    };
    let regions = |idx: &[usize]| -> Vec<Region> { idx.iter().map(|&i| s.boxes[i].region.clone()).collect() };
    let box_list = |idx: &[usize]| -> String {
        idx.iter().map(|&i| s.boxes[i].name.as_str()).collect::<Vec<_>>().join(", ")
    };
    let mut lines = Vec::new();
    let mut nets = Vec::new();

    let (raw, detail) = match (&task.args, task.kind) {
        (Args::Net { net, boxes }, Kind::Moderate | Kind::Negligible) => {
            let n = &s.nets[*net];
            lines.push(format!(
                "{} = {} on {} up to order {order}, degree {degree}, grid {}",
                n.name,
                n.text,
                box_list(boxes),
                grid.points_per_axis()
            ));
            let report = if task.kind == Kind::Moderate {
                classifier.moderate(&n.expr, &regions(boxes), order)
            } else {
                classifier.negligible(&n.expr, &regions(boxes), order)
            }
            .map_err(|e| e.to_string())?;
            ctx.entries(&report, &mut lines, &mut nets);
            (classification_outcome(report.overall), report.overall.to_string())
        }
        (Args::Net { net, boxes }, _) => {
            let n = &s.nets[*net];
            lines.push(format!(
                "{} = {} on {} up to order {order}, degree {degree}, grid {}",
                n.name,
                n.text,
                box_list(boxes),
                grid.points_per_axis()
            ));
            let t = classifier
                .zero_order_reduction(&n.expr, &regions(boxes), order)
                .map_err(|e| e.to_string())?;
            theorem_lines(&ctx, &t, &mut lines, &mut nets);
            if t.agreement {
                (Outcome::Pass, format!("agreement at orders 1..={order}"))
            } else if let Some(a) = &t.abort {
                let h = match a.hypothesis {
                    Hypothesis::Moderateness => "moderateness",
                    Hypothesis::ZeroOrderIdeal => "zero-order negligibility",
                };
                (Outcome::Fail, format!("aborted: {h} hypothesis fails at order {}", a.order))
            } else {
                (Outcome::Fail, "conclusion checks disagree".to_string())
            }
        }
        (Args::Equality { lhs, rhs, boxes }, _) => {
            let (u, v) = (&s.nets[*lhs], &s.nets[*rhs]);
            lines.push(format!(
                "[{}] = [{}] on {} up to order {order}, degree {degree}, grid {}",
                u.name,
                v.name,
                box_list(boxes),
                grid.points_per_axis()
            ));
            let r = classifier
                .equality(&u.expr, &v.expr, &regions(boxes), order)
                .map_err(|e| e.to_string())?;
            lines.push(format!("difference ({}) - ({})", u.text, v.text));
            ctx.entries(&r.difference, &mut lines, &mut nets);
            lines.push(format!("equality {}", verdict(&r.verdict, &ctx.names)));
            (verdict_outcome(&r.verdict), format!("difference {}", r.difference.overall))
        }
        (Args::Embedding { net, boxes }, _) => {
            let n = &s.nets[*net];
            lines.push(format!("f = {} on {}, degree {degree}", n.text, box_list(boxes)));
            let r = classifier.embedding(&n.expr, &regions(boxes)).map_err(|e| e.to_string())?;
            ctx.entries(&r.report, &mut lines, &mut nets);
            let detail = format!(
                "constant net {}, f {}, injective {}",
                r.report.overall,
                if r.vanishes { "vanishes" } else { "does not vanish" },
                if r.injective { "yes" } else { "no" }
            );
            (if r.injective { Outcome::Pass } else { Outcome::Fail }, detail)
        }
        (Args::Dominate { lhs, rhs }, _) => {
            let operand = |g: &cepalg::expr::GaugeExpr| -> Result<Side, String> {
                Ok(match normalize(g.expr(), family).element() {
                    Some(e) => Side::Element(e),
                    None => Side::Net(SampledNet::from_expr(family, g.expr()).map_err(|e| e.to_string())?),
                })
            };
            let (a, b) = (operand(lhs)?, operand(rhs)?);
            lines.push(format!("|{}| << {}", a.describe(&ctx.names), b.describe(&ctx.names)));
            let v = dominates(a.operand(), b.operand(), family).map_err(|e| e.to_string())?;
            lines.push(format!("dominance {}", verdict(&v, &ctx.names)));
            (verdict_outcome(&v), format!("dominance {}", v.tag()))
        }
    };
    Ok(Body {
        raw,
        detail,
        lines,
        nets,
    })
}

enum Side {
    Element(cepalg::scale::ScaleElement),
    Net(SampledNet<f64>),
}

impl Side {
    fn operand(&self) -> Operand<'_, f64> {
        match self {
            Side::Element(e) => e.into(),
            Side::Net(n) => n.into(),
        }
    }

    fn describe(&self, names: &[String]) -> String {
        match self {
            Side::Element(e) => e.render(names),
            Side::Net(n) => format!("{} (sampled)", n.label()),
        }
    }
}

fn theorem_lines(
    ctx: &Context<'_>,
    t: &TheoremReport<f64>,
    lines: &mut Vec<String>,
    nets: &mut Vec<(String, SeminormNet)>,
) {
    lines.push(format!("hypothesis moderate up to order {}: {}", t.order + 2, t.moderate.overall));
    ctx.entries(&t.moderate, lines, nets);
    lines.push(format!("hypothesis zero-order negligible: {}", t.zero_order.overall));
    for e in &t.zero_order.entries {
        lines.push(ctx.entry_line(e));
    }
    if let Some(a) = &t.abort {
        lines.push(format!("abort on {} at order {}: {}", a.region, a.order, a.detail));
        return;
    }
    for c in &t.checks {
        let held = c.replay.iter().filter(|r| r.held()).count();
        lines.push(format!(
            "order {} on {}: direct {}; replay {held}/{} steps hold",
            c.order(),
            region_name(c.region(), ctx.boxes),
            c.direct.ideal.as_ref().map_or_else(String::new, |v| verdict(v, &ctx.names)),
            c.replay.len()
        ));
        for r in &c.replay {
            let tail = r.measured.len() - ctx.tail;
            let worst = r.measured[tail..]
                .iter()
                .zip(&r.bound[tail..])
                .map(|(m, b)| if *b > 0.0 { m / b } else { 0.0 })
                .fold(0.0, f64::max);
            lines.push(format!(
                "  {} then d{}: beta {}, c {}, b {}; step {}, beta covers {}, bound >= measured {} (max ratio {}), bound ideal {}",
                alpha_label(&r.alpha),
                r.axis,
                r.beta.render(&ctx.names),
                r.c.render(&ctx.names),
                r.b.render(&ctx.names),
                yes(r.step_ok),
                yes(r.beta_covers),
                yes(r.bound_holds),
                sig6(worst),
                r.bound_ideal.tag()
            ));
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
