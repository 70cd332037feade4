//! Executes a checked scenario, one report per command.

use std::path::PathBuf;

use qmsets::{
    block_sizes, born_distribution, bracket, cascade_distribution, csca_measure_from, dit,
    eigen_sets, enumerate_partitions, evolve, is_csca, is_invariant, is_nonsingular,
    join_attributes, ket_table, ketbra_resolve, logical_entropy, measure_distribution,
    measure_sample_at, measurement_join, norm, orbit_partition, pythagoras_check, refines,
    spectral_decompose, OutcomeDistribution, Probability, RowOrder, SetKet, SetPartition, Value,
};
use thiserror::Error;

use crate::lattice::lattice_render;
use crate::render::{decimal, decimal_signed, fraction, render_reports, Format, Report, Table};
use crate::scenario::{Bounds, Command, CommandKind, Env, Scenario, ScenarioError, Target};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub row_order: RowOrder,
    /// Adds a 6-place decimal column next to every probability.
    pub decimals: bool,
    pub bounds: Bounds,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("line {line}: `{command}`: {source}")]
    Command {
        line: usize,
        command: String,
        source: qmsets::Error,
    },
}

/// Reports of a completed run, each with the file it was directed to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub seed: Option<u64>,
    pub reports: Vec<(Report, Option<PathBuf>)>,
}

impl Run {
    /// Everything not directed to a file, as one document.
    pub fn stdout(&self, format: Format) -> String {
        let shown: Vec<Report> = self
            .reports
            .iter()
            .filter(|(_, dest)| dest.is_none())
            .map(|(r, _)| r.clone())
            .collect();
        render_reports(&shown, format, self.seed)
    }

    /// `(destination, contents)` for every command that named a file.
    pub fn files(&self, format: Format) -> Vec<(PathBuf, String)> {
        self.reports
            .iter()
            .filter_map(|(r, dest)| {
                dest.as_ref().map(|d| {
                    (
                        d.clone(),
                        render_reports(std::slice::from_ref(r), format, self.seed),
                    )
                })
            })
            .collect()
    }

    /// The full machine-readable record of the run.
    pub fn records(&self) -> String {
        let all: Vec<Report> = self.reports.iter().map(|(r, _)| r.clone()).collect();
        render_reports(&all, Format::Records, self.seed)
    }
}

/// Checks `scenario` and executes its commands in order.
pub fn run_scenario(scenario: &Scenario, options: &RunOptions) -> Result<Run, RunError> {
    let env = scenario.check(&options.bounds)?;
    let mut reports = Vec::with_capacity(scenario.commands.len());
    for (index, located) in scenario.commands.iter().enumerate() {
        let command = &located.item;
        let ctx = Context {
            env: &env,
            options,
            seed: scenario.seed.unwrap_or(0),
            index: index as u64,
        };
        let (tables, diagram) = ctx.execute(command).map_err(|source| RunError::Command {
            line: located.line,
            command: command.to_string(),
            source,
        })?;
        let mut shown = command.clone();
        shown.output = None;
        reports.push((
            Report {
                command: shown.to_string(),
                line: located.line,
                tables,
                diagram,
            },
            command.output.as_ref().map(PathBuf::from),
        ));
    }
    Ok(Run {
        seed: scenario.seed,
        reports,
    })
}

struct Context<'a> {
    env: &'a Env,
    options: &'a RunOptions,
    seed: u64,
    index: u64,
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn tuple_text(values: &[Value]) -> String {
    Value::Tuple(values.to_vec()).to_string()
}

/// The ket as written, plus its subset of `U` when the basis is not standard.
fn ket_text(s: &SetKet) -> String {
    if s.basis().is_standard() {
        s.to_string()
    } else {
        format!("{} = {}", s, s.to_standard())
    }
}

fn block_texts(p: &SetPartition) -> Vec<String> {
    p.blocks()
        .iter()
        .map(|b| p.universe().format_mask(*b))
        .collect()
}

impl Context<'_> {
    fn probability_columns<'c>(&self, first: &[&'c str], last: &[&'c str]) -> Vec<&'c str> {
        let mut cols = first.to_vec();
        cols.push("probability");
        if self.options.decimals {
            cols.push("decimal");
        }
        cols.extend_from_slice(last);
        cols
    }

    fn probability_cells(&self, p: Probability) -> Vec<String> {
        let mut cells = vec![fraction(p)];
        if self.options.decimals {
            cells.push(decimal(p));
        }
        cells
    }

    fn row(&self, first: Vec<String>, p: Probability, last: Vec<String>) -> Vec<String> {
        let mut row = first;
        row.extend(self.probability_cells(p));
        row.extend(last);
        row
    }

    fn distribution_tables(&self, d: &OutcomeDistribution) -> Vec<Table> {
        let mut t = Table::new(
            "outcomes",
            &self.probability_columns(&["value"], &["state"]),
        );
        for o in &d.outcomes {
            t.push(self.row(
                vec![o.value.to_string()],
                o.probability,
                vec![o.state.to_string()],
            ));
        }
        let mut summary = Table::new("summary", &["quantity", "value"]);
        summary.push(vec!["state".into(), d.state.to_string()]);
        summary.push(vec!["total".into(), fraction(d.total())]);
        if let Some(e) = d.expectation() {
            let exact = if e.is_integer() {
                e.numer().to_string()
            } else {
                format!("{}/{}", e.numer(), e.denom())
            };
            summary.push(vec!["expectation".into(), exact]);
            summary.push(vec!["expectation (decimal)".into(), decimal_signed(e)]);
        }
        vec![t, summary]
    }

    fn execute(&self, c: &Command) -> qmsets::Result<(Vec<Table>, Option<String>)> {
        let env = self.env;
        let mut diagram = None;
        let n = &c.names;
        let tables = match c.kind {
            CommandKind::KetTable => {
                let bases: Vec<_> = n.iter().map(|b| env.basis(b).clone()).collect();
                let kt = ket_table(&bases, self.options.row_order, self.options.bounds.table)?;
                let headings = kt.headings();
                let cols: Vec<&str> = headings.iter().map(String::as_str).collect();
                let mut t = Table::new("kets", &cols);
                for row in kt.cells() {
                    t.push(row);
                }
                vec![t]
            }
            CommandKind::Bracket => {
                let (t, s) = (env.state(&n[0]), env.state(&n[1]));
                let b = bracket(&t.to_standard(), &s.to_standard())?;
                let mut table = Table::new("bracket", &["bra", "ket", "bracket"]);
                table.push(vec![ket_text(t), ket_text(s), b.to_string()]);
                vec![table]
            }
            CommandKind::Norm => {
                let s = env.state(&n[0]);
                let m = norm(&s.to_standard())?;
                let mut t = Table::new("norm", &["state", "norm squared", "norm"]);
                t.push(vec![
                    ket_text(s),
                    m.squared.to_string(),
                    format!("{:.6}", m.value),
                ]);
                vec![t]
            }
            CommandKind::KetBra => {
                let (t, s) = (env.state(&n[0]), env.state(&n[1]));
                let r = ketbra_resolve(&t.to_standard(), &s.to_standard())?;
                let mut table = Table::new("resolution", &["bra", "ket", "singletons", "sum"]);
                let singles: Vec<String> = r.singletons.iter().map(ToString::to_string).collect();
                table.push(vec![
                    ket_text(t),
                    ket_text(s),
                    singles.join(" + "),
                    r.sum.to_string(),
                ]);
                vec![table]
            }
            CommandKind::Born => {
                self.distribution_tables(&born_distribution(&env.state(&n[0]).to_standard())?)
            }
            CommandKind::Distribution => self.distribution_tables(&measure_distribution(
                env.attribute(&n[0]),
                env.state(&n[1]),
            )?),
            CommandKind::Measure => {
                let step = measure_sample_at(
                    env.attribute(&n[0]),
                    env.state(&n[1]),
                    self.seed,
                    self.index,
                )?;
                let mut t = Table::new(
                    "measurement",
                    &self.probability_columns(&["attribute", "value"], &["pre", "post"]),
                );
                t.push(self.row(
                    vec![step.attribute.clone(), step.value.to_string()],
                    step.probability,
                    vec![step.pre.to_string(), step.post.to_string()],
                ));
                vec![t]
            }
            CommandKind::Spectral => {
                let d = spectral_decompose(env.attribute(&n[0]));
                let mut t = Table::new("spectral", &["value", "projection"]);
                for (v, p) in &d.terms {
                    t.push(vec![v.to_string(), p.to_string()]);
                }
                vec![t]
            }
            CommandKind::Eigen => {
                let value = c.value.as_ref().expect("eigen carries a value");
                let mut t = Table::new("eigen-sets", &["eigen-set"]);
                for s in eigen_sets(env.attribute(&n[0]), value) {
                    t.push(vec![s.to_string()]);
                }
                vec![t]
            }
            CommandKind::MeasurementJoin => {
                let j = measurement_join(env.attribute(&n[0]), env.state(&n[1]))?;
                let mut t = Table::new("join", &["block", "possible"]);
                for (b, p) in block_texts(&j.partition).into_iter().zip(&j.possible) {
                    t.push(vec![b, yes(*p)]);
                }
                vec![t]
            }
            CommandKind::Entropy => {
                let p = env.target(&n[0]).partition();
                let h = logical_entropy(&p);
                let mut t = Table::new("entropy", &["partition", "dits", "entropy", "decimal"]);
                t.push(vec![
                    p.to_string(),
                    dit(&p).len().to_string(),
                    fraction(h),
                    decimal(h),
                ]);
                vec![t]
            }
            CommandKind::Dit => {
                let p = env.target(&n[0]).partition();
                let u = p.universe();
                let mut t = Table::new("dits", &["u", "v"]);
                for (a, b) in dit(&p).pairs() {
                    t.push(vec![u.label(a).to_string(), u.label(b).to_string()]);
                }
                vec![t]
            }
            CommandKind::Blocks => {
                let p = env.target(&n[0]).partition();
                let mut t = Table::new("blocks", &["block", "size"]);
                for (b, labels) in block_texts(&p).into_iter().zip(p.block_labels()) {
                    t.push(vec![b, labels.len().to_string()]);
                }
                let mut summary = Table::new("summary", &["blocks", "sizes"]);
                let sizes: Vec<String> = block_sizes(&p).iter().map(ToString::to_string).collect();
                summary.push(vec![p.block_count().to_string(), sizes.join(",")]);
                vec![t, summary]
            }
            CommandKind::Join => {
                let all_attributes = n
                    .iter()
                    .all(|x| matches!(env.target(x), Target::Attribute(_)));
                if all_attributes {
                    let j = join_attributes(&env.attribute_set(n)?)?;
                    let mut t = Table::new("join", &["block", "values"]);
                    for (b, v) in block_texts(&j.partition).into_iter().zip(&j.tuples) {
                        t.push(vec![b, tuple_text(v)]);
                    }
                    vec![t]
                } else {
                    let mut p = env.target(&n[0]).partition();
                    for x in &n[1..] {
                        p = qmsets::join(&p, &env.target(x).partition())?;
                    }
                    let mut t = Table::new("join", &["block"]);
                    for b in block_texts(&p) {
                        t.push(vec![b]);
                    }
                    vec![t]
                }
            }
            CommandKind::Refines => {
                let (p, q) = (env.target(&n[0]).partition(), env.target(&n[1]).partition());
                let mut t = Table::new("refines", &["finer", "coarser", "refines"]);
                t.push(vec![p.to_string(), q.to_string(), yes(refines(&p, &q)?)]);
                vec![t]
            }
            CommandKind::Csca => {
                let fs = env.attribute_set(n)?;
                let mut t = Table::new("csca", &["attributes", "complete"]);
                t.push(vec![n.join(","), yes(is_csca(&fs)?)]);
                vec![t]
            }
            CommandKind::Cascade => {
                let (attrs, state) = n.split_at(n.len() - 1);
                let fs = env.attribute_set(attrs)?;
                let rec =
                    csca_measure_from(&fs, env.state(&state[0]), self.seed, self.index << 32)?;
                let mut steps = Table::new(
                    "steps",
                    &self.probability_columns(&["step", "attribute", "value"], &["pre", "post"]),
                );
                for (k, s) in rec.steps.iter().enumerate() {
                    steps.push(self.row(
                        vec![
                            (k + 1).to_string(),
                            s.attribute.clone(),
                            s.value.to_string(),
                        ],
                        s.probability,
                        vec![s.pre.to_string(), s.post.to_string()],
                    ));
                }
                let mut result = Table::new(
                    "result",
                    &self.probability_columns(&["values", "final"], &[]),
                );
                let last = rec.final_state().expect("nonempty attribute set");
                result.push(self.row(
                    vec![tuple_text(&rec.tuple()), last.to_string()],
                    rec.probability(),
                    vec![],
                ));
                vec![steps, result]
            }
            CommandKind::Outcomes => {
                let (attrs, state) = n.split_at(n.len() - 1);
                let fs = env.attribute_set(attrs)?;
                let leaves = cascade_distribution(&fs, env.state(&state[0]))?;
                let mut t = Table::new(
                    "outcomes",
                    &self.probability_columns(&["values", "final"], &[]),
                );
                for leaf in leaves {
                    t.push(self.row(
                        vec![tuple_text(&leaf.tuple), leaf.state.to_string()],
                        leaf.probability,
                        vec![],
                    ));
                }
                vec![t]
            }
            CommandKind::Orbits => {
                let g = env.group(&n[0]);
                let p = orbit_partition(g);
                let mut t = Table::new("orbits", &["orbit", "size"]);
                for (b, labels) in block_texts(&p).into_iter().zip(p.block_labels()) {
                    t.push(vec![b, labels.len().to_string()]);
                }
                let mut summary = Table::new("summary", &["group order", "orbits"]);
                summary.push(vec![g.order().to_string(), p.block_count().to_string()]);
                vec![t, summary]
            }
            CommandKind::Axioms => {
                let g = env.group(&n[0]);
                let r = g.verify();
                let mut t = Table::new("axioms", &["group", "order", "holds", "report"]);
                t.push(vec![
                    n[0].clone(),
                    g.order().to_string(),
                    yes(r.holds()),
                    r.to_string(),
                ]);
                vec![t]
            }
            CommandKind::Invariant => {
                let s = env.state(&n[1]);
                let mut t = Table::new("invariant", &["group", "state", "invariant"]);
                t.push(vec![
                    n[0].clone(),
                    ket_text(s),
                    yes(is_invariant(env.group(&n[0]), s)?),
                ]);
                vec![t]
            }
            CommandKind::Evolve => {
                let s = env.state(&n[1]);
                let image = evolve(env.map(&n[0]), s)?;
                let mut t = Table::new("evolve", &["map", "state", "image"]);
                t.push(vec![n[0].clone(), ket_text(s), ket_text(&image)]);
                vec![t]
            }
            CommandKind::Nonsingular => {
                let m = env.map(&n[0]);
                let mut t = Table::new("nonsingular", &["map", "rank", "nonsingular"]);
                t.push(vec![
                    n[0].clone(),
                    m.rank().to_string(),
                    yes(is_nonsingular(m)),
                ]);
                vec![t]
            }
            CommandKind::Pythagoras => {
                let p = env.target(&n[0]).partition();
                let s = env.state(&n[1]);
                let (left, right) = pythagoras_check(&p, &s.to_standard())?;
                let mut t = Table::new(
                    "pythagoras",
                    &[
                        "partition",
                        "state",
                        "norm squared",
                        "sum over blocks",
                        "equal",
                    ],
                );
                t.push(vec![
                    p.to_string(),
                    ket_text(s),
                    left.to_string(),
                    right.to_string(),
                    yes(left == right),
                ]);
                vec![t]
            }
            CommandKind::Lattice => {
                let l = lattice_render(env.universe(&n[0]), self.options.bounds.partitions)?;
                diagram = Some(l.diagram());
                l.tables()
            }
            CommandKind::Partitions => {
                let ps = enumerate_partitions(env.universe(&n[0]), self.options.bounds.partitions)?;
                let mut t = Table::new("partitions", &["partition", "blocks"]);
                for p in ps {
                    t.push(vec![p.to_string(), p.block_count().to_string()]);
                }
                vec![t]
            }
        };
        Ok((tables, diagram))
    }
}
