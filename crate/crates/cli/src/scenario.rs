//! Scenario files: syntax, validation and canonical serialization.
//!
//! ```text
//! # comments run to end of line
//! seed 42
//!
//! [declarations]
//! universe U = {a,b,c}
//! basis U' on U = a'={a,b}, b'={b,c}, c'={a,b,c}
//! attribute f on U = a:1, b:1, c:2
//! group G on U = (a b c), (a b)
//! map M on U = a->{b}, b->{a}, c->{c}
//! map P on U = perm (a b)
//! partition P2 on U = {a}|{b,c}
//! state S = U{a,b}
//!
//! [commands]
//! ket-table U U'
//! distribution f S > dist.txt
//! ```

use std::collections::HashMap;
use std::fmt;

use qmsets::{
    check_basis, generate_group, Attribute, AttributeSet, Basis, LinearMap, Permutation, SetKet,
    SetPartition, TransformationGroup, Universe, Value, DEFAULT_GROUP_BOUND,
    DEFAULT_PARTITION_BOUND, DEFAULT_TABLE_BOUND,
};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: `{name}`: {rule}")]
    Semantic {
        line: usize,
        name: String,
        rule: String,
    },
}

/// A list of element (or basis-element) labels written `{a,b}`.
pub type LabelSet = Vec<String>;

/// A permutation in cycle notation; an empty list is the identity `()`.
pub type Cycles = Vec<Vec<String>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapBody {
    /// Image of each domain basis element.
    Columns(Vec<(String, LabelSet)>),
    Perm(Cycles),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Declaration {
    Universe {
        name: String,
        labels: LabelSet,
    },
    Basis {
        name: String,
        universe: String,
        vectors: Vec<(String, LabelSet)>,
    },
    Attribute {
        name: String,
        universe: String,
        values: Vec<(String, Value)>,
    },
    Group {
        name: String,
        universe: String,
        generators: Vec<Cycles>,
    },
    Map {
        name: String,
        basis: String,
        body: MapBody,
    },
    Partition {
        name: String,
        universe: String,
        blocks: Vec<LabelSet>,
    },
    State {
        name: String,
        basis: String,
        labels: LabelSet,
    },
}

impl Declaration {
    pub fn name(&self) -> &str {
        match self {
            Declaration::Universe { name, .. }
            | Declaration::Basis { name, .. }
            | Declaration::Attribute { name, .. }
            | Declaration::Group { name, .. }
            | Declaration::Map { name, .. }
            | Declaration::Partition { name, .. }
            | Declaration::State { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Universe,
    Basis,
    Attribute,
    Group,
    Map,
    Partition,
    State,
}

impl Kind {
    fn word(self) -> &'static str {
        match self {
            Kind::Universe => "universe",
            Kind::Basis => "basis",
            Kind::Attribute => "attribute",
            Kind::Group => "group",
            Kind::Map => "map",
            Kind::Partition => "partition",
            Kind::State => "state",
        }
    }
}

const TARGET: &[Kind] = &[Kind::Partition, Kind::Attribute];

enum Slot {
    One(&'static [Kind]),
    /// At least `min` names; only fixed slots may follow.
    Many(&'static [Kind], usize),
    Value,
}

macro_rules! commands {
    ($($variant:ident $word:literal [$($slot:expr),*] $sampling:literal;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum CommandKind { $($variant),* }

        impl CommandKind {
            pub const ALL: &'static [CommandKind] = &[$(CommandKind::$variant),*];

            pub fn word(self) -> &'static str {
                match self { $(CommandKind::$variant => $word),* }
            }

            fn signature(self) -> &'static [Slot] {
                match self { $(CommandKind::$variant => &[$($slot),*]),* }
            }

            /// Whether the command draws from the seeded generator.
            pub fn is_sampling(self) -> bool {
                match self { $(CommandKind::$variant => $sampling),* }
            }

            pub fn from_word(word: &str) -> Option<CommandKind> {
                CommandKind::ALL.iter().copied().find(|k| k.word() == word)
            }
        }
    };
}

use Slot::{Many, One};

commands! {
    KetTable "ket-table" [Many(&[Kind::Basis], 1)] false;
    Bracket "bracket" [One(&[Kind::State]), One(&[Kind::State])] false;
    Norm "norm" [One(&[Kind::State])] false;
    KetBra "ketbra" [One(&[Kind::State]), One(&[Kind::State])] false;
    Born "born" [One(&[Kind::State])] false;
    Distribution "distribution" [One(&[Kind::Attribute]), One(&[Kind::State])] false;
    Measure "measure" [One(&[Kind::Attribute]), One(&[Kind::State])] true;
    Spectral "spectral" [One(&[Kind::Attribute])] false;
    Eigen "eigen" [One(&[Kind::Attribute]), Slot::Value] false;
    MeasurementJoin "measurement-join" [One(&[Kind::Attribute]), One(&[Kind::State])] false;
    Entropy "entropy" [One(TARGET)] false;
    Dit "dit" [One(TARGET)] false;
    Blocks "blocks" [One(TARGET)] false;
    Join "join" [Many(TARGET, 1)] false;
    Refines "refines" [One(TARGET), One(TARGET)] false;
    Csca "csca" [Many(&[Kind::Attribute], 1)] false;
    Cascade "cascade" [Many(&[Kind::Attribute], 1), One(&[Kind::State])] true;
    Outcomes "outcomes" [Many(&[Kind::Attribute], 1), One(&[Kind::State])] false;
    Orbits "orbits" [One(&[Kind::Group])] false;
    Axioms "axioms" [One(&[Kind::Group])] false;
    Invariant "invariant" [One(&[Kind::Group]), One(&[Kind::State])] false;
    Evolve "evolve" [One(&[Kind::Map]), One(&[Kind::State])] false;
    Nonsingular "nonsingular" [One(&[Kind::Map])] false;
    Pythagoras "pythagoras" [One(TARGET), One(&[Kind::State])] false;
    Lattice "lattice" [One(&[Kind::Universe])] false;
    Partitions "partitions" [One(&[Kind::Universe])] false;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Command {
    pub kind: CommandKind,
    /// Referenced object names in argument order.
    pub names: Vec<String>,
    /// The literal of `eigen`.
    pub value: Option<Value>,
    /// Destination file, written as `> path`.
    pub output: Option<String>,
}

/// An item together with its source line. Equality ignores the line so that
/// reformatted scenarios compare equal.
#[derive(Debug, Clone, Eq)]
pub struct Located<T> {
    pub line: usize,
    pub item: T,
}

impl<T: PartialEq> PartialEq for Located<T> {
    fn eq(&self, other: &Self) -> bool {
        self.item == other.item
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Scenario {
    pub seed: Option<u64>,
    pub declarations: Vec<Located<Declaration>>,
    pub commands: Vec<Located<Command>>,
}

/// Enumeration limits applied while checking and running a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Largest universe whose partitions may be enumerated.
    pub partitions: usize,
    /// Largest generated group.
    pub group: usize,
    /// Largest universe whose ket table may be listed.
    pub table: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            partitions: DEFAULT_PARTITION_BOUND,
            group: DEFAULT_GROUP_BOUND,
            table: DEFAULT_TABLE_BOUND,
        }
    }
}

impl Bounds {
    /// Applies `key=value` with key `partitions`, `group` or `table`.
    pub fn set(&mut self, assignment: &str) -> Result<(), String> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got `{assignment}`"))?;
        let value: usize = value
            .trim()
            .parse()
            .map_err(|_| format!("bound `{key}` needs a nonnegative integer"))?;
        match key.trim() {
            "partitions" => self.partitions = value,
            "group" => self.group = value,
            "table" => self.table = value,
            other => {
                return Err(format!(
                    "unknown bound `{other}` (partitions, group, table)"
                ))
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------- lexing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Str(String),
    Sym(char),
    Arrow,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Str(s) => write!(f, "{s:?}"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Arrow => f.write_str("`->`"),
        }
    }
}

const SYMBOLS: &str = "{},|()=:[]>";

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn lex(text: &str, line: usize) -> Result<Vec<(Tok, usize)>, ScenarioError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            break;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((Tok::Arrow, column));
            i += 2;
        } else if SYMBOLS.contains(c) {
            out.push((Tok::Sym(c), column));
            i += 1;
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return Err(syntax(line, column, "unterminated string")),
                    Some('"') => break,
                    Some('\\') => {
                        match chars.get(i + 1) {
                            Some(e @ ('"' | '\\')) => s.push(*e),
                            _ => return Err(syntax(line, i + 1, "invalid escape")),
                        }
                        i += 2;
                    }
                    Some(ch) => {
                        s.push(*ch);
                        i += 1;
                    }
                }
            }
            out.push((Tok::Str(s), column));
            i += 1;
        } else {
            let start = i;
            while i < chars.len() {
                let ch = chars[i];
                if ch.is_whitespace()
                    || SYMBOLS.contains(ch)
                    || ch == '"'
                    || ch == '#'
                    || (ch == '-' && chars.get(i + 1) == Some(&'>'))
                {
                    break;
                }
                i += 1;
            }
            out.push((Tok::Word(chars[start..i].iter().collect()), column));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- parsing

struct Cursor {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end: usize,
}

impl Cursor {
    fn new(text: &str, line: usize) -> Result<Cursor, ScenarioError> {
        Ok(Cursor {
            toks: lex(text, line)?,
            pos: 0,
            line,
            end: text.chars().count() + 1,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, c)| *c)
    }

    fn error(&self, message: impl Into<String>) -> ScenarioError {
        syntax(self.line, self.column(), message)
    }

    fn unexpected(&self, wanted: &str) -> ScenarioError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {t}")),
            None => self.error(format!("expected {wanted}, found end of line")),
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.toks.len()
    }

    fn finish(&self) -> Result<(), ScenarioError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ScenarioError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn word(&mut self, what: &str) -> Result<String, ScenarioError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn keyword(&mut self, k: &str) -> Result<(), ScenarioError> {
        match self.peek() {
            Some(Tok::Word(w)) if w == k => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.unexpected(&format!("`{k}`"))),
        }
    }

    /// `{a,b}`, `{}` or `∅`.
    fn set(&mut self) -> Result<LabelSet, ScenarioError> {
        if let Some(Tok::Word(w)) = self.peek() {
            if w == "∅" {
                self.pos += 1;
                return Ok(Vec::new());
            }
        }
        self.expect('{')?;
        let mut labels = Vec::new();
        if self.eat('}') {
            return Ok(labels);
        }
        loop {
            labels.push(self.word("a label")?);
            if self.eat('}') {
                return Ok(labels);
            }
            self.expect(',')?;
        }
    }

    fn cycles(&mut self) -> Result<Cycles, ScenarioError> {
        let mut cycles = Vec::new();
        if self.peek() != Some(&Tok::Sym('(')) {
            return Err(self.unexpected("a permutation in cycle notation"));
        }
        while self.eat('(') {
            let mut cycle = Vec::new();
            while !self.eat(')') {
                cycle.push(self.word("a label or `)`")?);
            }
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
        }
        Ok(cycles)
    }

    fn value(&mut self) -> Result<Value, ScenarioError> {
        match self.peek().cloned() {
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(Value::token(s))
            }
            Some(Tok::Word(w)) => {
                self.pos += 1;
                Ok(Value::parse_number(&w).unwrap_or_else(|| Value::token(w)))
            }
            _ => Err(self.unexpected("a value")),
        }
    }

    fn comma_list<T>(
        &mut self,
        mut item: impl FnMut(&mut Cursor) -> Result<T, ScenarioError>,
    ) -> Result<Vec<T>, ScenarioError> {
        let mut items = vec![item(self)?];
        while self.eat(',') {
            items.push(item(self)?);
        }
        Ok(items)
    }
}

fn parse_declaration(c: &mut Cursor) -> Result<Declaration, ScenarioError> {
    let keyword = c.word("a declaration keyword")?;
    let decl = match keyword.as_str() {
        "universe" => {
            let name = c.word("a universe name")?;
            c.expect('=')?;
            Declaration::Universe {
                name,
                labels: c.set()?,
            }
        }
        "basis" => {
            let name = c.word("a basis name")?;
            c.keyword("on")?;
            let universe = c.word("a universe name")?;
            c.expect('=')?;
            let vectors = c.comma_list(|c| {
                let label = c.word("a basis element label")?;
                c.expect('=')?;
                Ok((label, c.set()?))
            })?;
            Declaration::Basis {
                name,
                universe,
                vectors,
            }
        }
        "attribute" => {
            let name = c.word("an attribute name")?;
            c.keyword("on")?;
            let universe = c.word("a universe name")?;
            c.expect('=')?;
            let values = c.comma_list(|c| {
                let label = c.word("an element label")?;
                c.expect(':')?;
                Ok((label, c.value()?))
            })?;
            Declaration::Attribute {
                name,
                universe,
                values,
            }
        }
        "group" => {
            let name = c.word("a group name")?;
            c.keyword("on")?;
            let universe = c.word("a universe name")?;
            c.expect('=')?;
            let generators = if c.at_end() {
                Vec::new()
            } else {
                c.comma_list(Cursor::cycles)?
            };
            Declaration::Group {
                name,
                universe,
                generators,
            }
        }
        "map" => {
            let name = c.word("a map name")?;
            c.keyword("on")?;
            let basis = c.word("a basis name")?;
            c.expect('=')?;
            let body = if c.peek() == Some(&Tok::Word("perm".into())) {
                c.pos += 1;
                MapBody::Perm(c.cycles()?)
            } else {
                MapBody::Columns(c.comma_list(|c| {
                    let label = c.word("a basis element label")?;
                    if c.peek() != Some(&Tok::Arrow) {
                        return Err(c.unexpected("`->`"));
                    }
                    c.pos += 1;
                    Ok((label, c.set()?))
                })?)
            };
            Declaration::Map { name, basis, body }
        }
        "partition" => {
            let name = c.word("a partition name")?;
            c.keyword("on")?;
            let universe = c.word("a universe name")?;
            c.expect('=')?;
            let mut blocks = vec![c.set()?];
            while c.eat('|') {
                blocks.push(c.set()?);
            }
            Declaration::Partition {
                name,
                universe,
                blocks,
            }
        }
        "state" => {
            let name = c.word("a state name")?;
            c.expect('=')?;
            let basis = c.word("a basis name")?;
            Declaration::State {
                name,
                basis,
                labels: c.set()?,
            }
        }
        other => {
            c.pos -= 1;
            return Err(c.error(format!("unknown declaration `{other}`")));
        }
    };
    c.finish()?;
    Ok(decl)
}

fn parse_command(c: &mut Cursor) -> Result<Command, ScenarioError> {
    let word = c.word("a command")?;
    let kind = CommandKind::from_word(&word).ok_or_else(|| {
        c.pos -= 1;
        c.error(format!("unknown command `{word}`"))
    })?;
    let mut names = Vec::new();
    let mut value = None;
    let mut args: Vec<(Tok, usize)> = Vec::new();
    while let Some(t) = c.peek() {
        if *t == Tok::Sym('>') {
            break;
        }
        args.push(c.toks[c.pos].clone());
        c.pos += 1;
    }
    let mut output = None;
    if c.eat('>') {
        output = Some(match c.peek().cloned() {
            Some(Tok::Word(w)) | Some(Tok::Str(w)) => {
                c.pos += 1;
                w
            }
            _ => return Err(c.unexpected("an output path")),
        });
        c.finish()?;
    }
    let arg_error = |column: usize, message: String| syntax(c.line, column, message);
    let fixed: usize = kind
        .signature()
        .iter()
        .filter(|s| !matches!(s, Many(..)))
        .count();
    let mut k = 0;
    for slot in kind.signature() {
        let take = match slot {
            Many(_, min) => {
                let n = args.len().saturating_sub(k + fixed);
                if n < *min {
                    let column = args.get(k).map_or(c.end, |a| a.1);
                    return Err(arg_error(
                        column,
                        format!("`{word}` needs at least {min} names here"),
                    ));
                }
                n
            }
            _ => 1,
        };
        for _ in 0..take {
            let Some((tok, column)) = args.get(k).cloned() else {
                return Err(arg_error(c.end, format!("`{word}` is missing an argument")));
            };
            match (slot, tok) {
                (Slot::Value, Tok::Str(s)) => value = Some(Value::token(s)),
                (Slot::Value, Tok::Word(w)) => {
                    value = Some(Value::parse_number(&w).unwrap_or_else(|| Value::token(w)))
                }
                (Slot::Value, t) => {
                    return Err(arg_error(column, format!("expected a value, found {t}")))
                }
                (_, Tok::Word(w)) => names.push(w),
                (_, t) => return Err(arg_error(column, format!("expected a name, found {t}"))),
            }
            k += 1;
        }
    }
    if let Some((t, column)) = args.get(k) {
        return Err(arg_error(
            *column,
            format!("unexpected argument {t} to `{word}`"),
        ));
    }
    Ok(Command {
        kind,
        names,
        value,
        output,
    })
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Preamble,
    Declarations,
    Commands,
}

/// Parses scenario text without checking the declared objects.
pub fn parse_syntax(text: &str) -> Result<Scenario, ScenarioError> {
    let mut scenario = Scenario::default();
    let mut section = Section::Preamble;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let mut c = Cursor::new(raw, line)?;
        if c.at_end() {
            continue;
        }
        if c.eat('[') {
            let name = c.word("a section name")?;
            c.expect(']')?;
            c.finish()?;
            let next = match name.as_str() {
                "declarations" => Section::Declarations,
                "commands" => Section::Commands,
                other => return Err(syntax(line, 2, format!("unknown section `{other}`"))),
            };
            if (next as u8) <= (section as u8) {
                return Err(syntax(line, 1, format!("section `[{name}]` out of order")));
            }
            section = next;
            continue;
        }
        if c.peek() == Some(&Tok::Word("seed".into())) && section != Section::Commands {
            c.pos += 1;
            if scenario.seed.is_some() {
                return Err(syntax(line, 1, "seed given twice"));
            }
            let column = c.column();
            let w = c.word("a seed")?;
            let seed = w.parse().map_err(|_| {
                syntax(
                    line,
                    column,
                    format!("seed `{w}` is not a 64-bit unsigned integer"),
                )
            })?;
            c.finish()?;
            scenario.seed = Some(seed);
            continue;
        }
        match section {
            Section::Preamble => {
                return Err(syntax(
                    line,
                    1,
                    "expected `seed` or a `[declarations]` section",
                ))
            }
            Section::Declarations => scenario.declarations.push(Located {
                line,
                item: parse_declaration(&mut c)?,
            }),
            Section::Commands => scenario.commands.push(Located {
                line,
                item: parse_command(&mut c)?,
            }),
        }
    }
    Ok(scenario)
}

/// Parses and checks a scenario with default bounds.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let scenario = parse_syntax(text)?;
    scenario.check(&Bounds::default())?;
    Ok(scenario)
}

// ---------------------------------------------------------------- checking

/// The objects built from a scenario's declarations.
#[derive(Debug, Clone, Default)]
pub struct Env {
    kinds: HashMap<String, Vec<Kind>>,
    universes: HashMap<String, Universe>,
    bases: HashMap<String, Basis>,
    attributes: HashMap<String, Attribute>,
    groups: HashMap<String, TransformationGroup>,
    maps: HashMap<String, LinearMap>,
    partitions: HashMap<String, SetPartition>,
    states: HashMap<String, SetKet>,
}

/// A partition-valued argument.
pub enum Target<'a> {
    Partition(&'a SetPartition),
    Attribute(&'a Attribute),
}

impl Target<'_> {
    pub fn partition(&self) -> SetPartition {
        match self {
            Target::Partition(p) => (*p).clone(),
            Target::Attribute(f) => f.partition(),
        }
    }
}

impl Env {
    pub fn universe(&self, name: &str) -> &Universe {
        &self.universes[name]
    }

    pub fn basis(&self, name: &str) -> &Basis {
        &self.bases[name]
    }

    pub fn attribute(&self, name: &str) -> &Attribute {
        &self.attributes[name]
    }

    pub fn attribute_set(&self, names: &[String]) -> qmsets::Result<AttributeSet> {
        AttributeSet::new(names.iter().map(|n| self.attributes[n].clone()).collect())
    }

    pub fn group(&self, name: &str) -> &TransformationGroup {
        &self.groups[name]
    }

    pub fn map(&self, name: &str) -> &LinearMap {
        &self.maps[name]
    }

    pub fn state(&self, name: &str) -> &SetKet {
        &self.states[name]
    }

    pub fn target(&self, name: &str) -> Target<'_> {
        match self.partitions.get(name) {
            Some(p) => Target::Partition(p),
            None => Target::Attribute(&self.attributes[name]),
        }
    }

    fn declare(&mut self, name: &str, kinds: Vec<Kind>, line: usize) -> Result<(), ScenarioError> {
        if let Some(existing) = self.kinds.get(name) {
            return Err(ScenarioError::Semantic {
                line,
                name: name.to_string(),
                rule: format!("name already declared as a {}", existing[0].word()),
            });
        }
        self.kinds.insert(name.to_string(), kinds);
        Ok(())
    }

    fn lookup(&self, name: &str, wanted: &[Kind], line: usize) -> Result<(), ScenarioError> {
        let words = || {
            wanted
                .iter()
                .map(|k| k.word())
                .collect::<Vec<_>>()
                .join(" or ")
        };
        match self.kinds.get(name) {
            None => Err(ScenarioError::Semantic {
                line,
                name: name.to_string(),
                rule: format!("undeclared {}", words()),
            }),
            Some(kinds) if !kinds.iter().any(|k| wanted.contains(k)) => {
                Err(ScenarioError::Semantic {
                    line,
                    name: name.to_string(),
                    rule: format!("is a {}, expected a {}", kinds[0].word(), words()),
                })
            }
            Some(_) => Ok(()),
        }
    }
}

fn cycles_text(cycles: &Cycles) -> String {
    if cycles.is_empty() {
        return "()".into();
    }
    cycles
        .iter()
        .map(|c| format!("({})", c.join(" ")))
        .collect()
}

impl Scenario {
    /// Builds every declared object and checks every command reference.
    pub fn check(&self, bounds: &Bounds) -> Result<Env, ScenarioError> {
        let mut env = Env::default();
        for Located { line, item } in &self.declarations {
            let line = *line;
            let name = item.name();
            let semantic = |rule: String| ScenarioError::Semantic {
                line,
                name: name.to_string(),
                rule,
            };
            let lib = |e: qmsets::Error| semantic(e.to_string());
            match item {
                Declaration::Universe { labels, .. } => {
                    env.declare(name, vec![Kind::Universe, Kind::Basis], line)?;
                    let u = Universe::new(labels).map_err(lib)?;
                    env.bases
                        .insert(name.into(), Basis::standard_named(&u, name));
                    env.universes.insert(name.into(), u);
                }
                Declaration::Basis {
                    universe, vectors, ..
                } => {
                    env.lookup(universe, &[Kind::Universe], line)?;
                    env.declare(name, vec![Kind::Basis], line)?;
                    let u = &env.universes[universe];
                    let masks = vectors
                        .iter()
                        .map(|(_, set)| u.mask_of(set))
                        .collect::<qmsets::Result<Vec<_>>>()
                        .map_err(lib)?;
                    let labels = vectors.iter().map(|(l, _)| l.clone()).collect();
                    let b = check_basis(u, name, labels, masks).map_err(lib)?;
                    env.bases.insert(name.into(), b);
                }
                Declaration::Attribute {
                    universe, values, ..
                } => {
                    env.lookup(universe, &[Kind::Universe], line)?;
                    env.declare(name, vec![Kind::Attribute], line)?;
                    let f = Attribute::new(name, &env.universes[universe], values.clone())
                        .map_err(lib)?;
                    env.attributes.insert(name.into(), f);
                }
                Declaration::Group {
                    universe,
                    generators,
                    ..
                } => {
                    env.lookup(universe, &[Kind::Universe], line)?;
                    env.declare(name, vec![Kind::Group], line)?;
                    let u = &env.universes[universe];
                    let gens = generators
                        .iter()
                        .map(|g| Permutation::parse_cycles(u, &cycles_text(g)))
                        .collect::<qmsets::Result<Vec<_>>>()
                        .map_err(lib)?;
                    let g = generate_group(u, &gens, bounds.group).map_err(lib)?;
                    env.groups.insert(name.into(), g);
                }
                Declaration::Map { basis, body, .. } => {
                    env.lookup(basis, &[Kind::Basis], line)?;
                    env.declare(name, vec![Kind::Map], line)?;
                    let b = &env.bases[basis];
                    let m = match body {
                        MapBody::Perm(cycles) => {
                            if !b.is_standard() || !env.universes.contains_key(basis) {
                                return Err(semantic(format!(
                                    "`perm` maps need a universe's standard basis, not `{basis}`"
                                )));
                            }
                            let p = Permutation::parse_cycles(b.universe(), &cycles_text(cycles))
                                .map_err(lib)?;
                            LinearMap::from_permutation(&p)
                        }
                        MapBody::Columns(columns) => {
                            let mut images = vec![None; b.dim()];
                            for (label, image) in columns {
                                let i = b.label_index(label).ok_or_else(|| {
                                    semantic(format!("`{label}` is not an element of `{basis}`"))
                                })?;
                                if images[i].is_some() {
                                    return Err(semantic(format!("`{label}` mapped twice")));
                                }
                                images[i] = Some(b.coords_of(image).map_err(lib)?);
                            }
                            let cols = images
                                .iter()
                                .enumerate()
                                .map(|(i, c)| {
                                    c.ok_or_else(|| {
                                        semantic(format!("no image given for `{}`", b.labels()[i]))
                                    })
                                })
                                .collect::<Result<Vec<_>, _>>()?;
                            LinearMap::on_basis(b, cols).map_err(lib)?
                        }
                    };
                    env.maps.insert(name.into(), m);
                }
                Declaration::Partition {
                    universe, blocks, ..
                } => {
                    env.lookup(universe, &[Kind::Universe], line)?;
                    env.declare(name, vec![Kind::Partition], line)?;
                    let p =
                        SetPartition::from_blocks(&env.universes[universe], blocks).map_err(lib)?;
                    env.partitions.insert(name.into(), p);
                }
                Declaration::State { basis, labels, .. } => {
                    env.lookup(basis, &[Kind::Basis], line)?;
                    env.declare(name, vec![Kind::State], line)?;
                    let s = SetKet::from_labels(&env.bases[basis], labels).map_err(lib)?;
                    env.states.insert(name.into(), s);
                }
            }
        }
        for Located { line, item } in &self.commands {
            let mut names = item.names.iter();
            for slot in item.kind.signature() {
                match slot {
                    One(kinds) => env.lookup(names.next().expect("arity checked"), kinds, *line)?,
                    Many(kinds, _) => {
                        let n = item.names.len() + 1 - item.kind.signature().len();
                        for _ in 0..n {
                            env.lookup(names.next().expect("arity checked"), kinds, *line)?;
                        }
                    }
                    Slot::Value => {}
                }
            }
            if item.kind.is_sampling() && self.seed.is_none() {
                return Err(ScenarioError::Semantic {
                    line: *line,
                    name: item.kind.word().into(),
                    rule: "sampling command needs a `seed`".into(),
                });
            }
        }
        Ok(env)
    }
}

// ---------------------------------------------------------------- serialization

fn set_text(labels: &LabelSet) -> String {
    format!("{{{}}}", labels.join(","))
}

fn value_text(v: &Value) -> String {
    match v {
        Value::Token(s) => format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"")),
        other => other.to_string(),
    }
}

fn word_text(w: &str) -> String {
    let plain = !w.is_empty()
        && !w
            .chars()
            .any(|c| c.is_whitespace() || SYMBOLS.contains(c) || c == '"' || c == '#')
        && !w.contains("->");
    if plain {
        w.to_string()
    } else {
        value_text(&Value::token(w))
    }
}

impl fmt::Display for Declaration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs = |items: &[(String, LabelSet)], sep: &str| {
            items
                .iter()
                .map(|(l, s)| format!("{l}{sep}{}", set_text(s)))
                .collect::<Vec<_>>()
                .join(", ")
        };
        match self {
            Declaration::Universe { name, labels } => {
                write!(f, "universe {name} = {}", set_text(labels))
            }
            Declaration::Basis {
                name,
                universe,
                vectors,
            } => write!(f, "basis {name} on {universe} = {}", pairs(vectors, "=")),
            Declaration::Attribute {
                name,
                universe,
                values,
            } => {
                let vs: Vec<String> = values
                    .iter()
                    .map(|(l, v)| format!("{l}:{}", value_text(v)))
                    .collect();
                write!(f, "attribute {name} on {universe} = {}", vs.join(", "))
            }
            Declaration::Group {
                name,
                universe,
                generators,
            } => {
                write!(f, "group {name} on {universe} =")?;
                if !generators.is_empty() {
                    let gs: Vec<String> = generators.iter().map(cycles_text).collect();
                    write!(f, " {}", gs.join(", "))?;
                }
                Ok(())
            }
            Declaration::Map { name, basis, body } => match body {
                MapBody::Perm(cycles) => {
                    write!(f, "map {name} on {basis} = perm {}", cycles_text(cycles))
                }
                MapBody::Columns(columns) => {
                    write!(f, "map {name} on {basis} = {}", pairs(columns, "->"))
                }
            },
            Declaration::Partition {
                name,
                universe,
                blocks,
            } => {
                let bs: Vec<String> = blocks.iter().map(set_text).collect();
                write!(f, "partition {name} on {universe} = {}", bs.join("|"))
            }
            Declaration::State {
                name,
                basis,
                labels,
            } => write!(f, "state {name} = {basis}{}", set_text(labels)),
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.word())?;
        for n in &self.names {
            write!(f, " {n}")?;
        }
        if let Some(v) = &self.value {
            write!(f, " {}", value_text(v))?;
        }
        if let Some(path) = &self.output {
            write!(f, " > {}", word_text(path))?;
        }
        Ok(())
    }
}

impl fmt::Display for Scenario {
    /// The canonical text form; parsing it gives back an equal scenario.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(seed) = self.seed {
            writeln!(f, "seed {seed}\n")?;
        }
        writeln!(f, "[declarations]")?;
        for d in &self.declarations {
            writeln!(f, "{}", d.item)?;
        }
        writeln!(f, "\n[commands]")?;
        for c in &self.commands {
            writeln!(f, "{}", c.item)?;
        }
        Ok(())
    }
}
