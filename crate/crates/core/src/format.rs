//! Line-oriented text formats for matroids, set families and task lists.
//!
//! Blank lines and lines starting with `#` are skipped. Every parse error
//! carries the 1-based line number it was found on.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::finitary::FinitarySpec;
use crate::finite::MatroidSpec;
use crate::set::{Element, ElementSet, SetFamily};
use crate::template::TemplateSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatroidDescription {
    Finite(MatroidSpec),
    Finitary(FinitarySpec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatroidFile {
    pub name: String,
    pub description: MatroidDescription,
}

fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(k, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then(|| (k + 1, l.split_whitespace().collect()))
    })
}

fn numbers(line: usize, words: &[&str]) -> Result<Vec<u64>> {
    words
        .iter()
        .map(|w| w.parse().map_err(|_| Error::parse(line, format!("expected a number, got '{w}'"))))
        .collect()
}

fn header<'a>(line: usize, words: &[&'a str], keywords: &[&str]) -> Result<&'a str> {
    match words {
        [k, name] if keywords.contains(k) => Ok(name),
        _ => Err(Error::parse(line, format!("expected '{} <name>'", keywords[0]))),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Backend {
    Uniform,
    Graphic,
    Linear,
    Explicit,
}

impl Backend {
    fn parse(line: usize, w: &str) -> Result<Self> {
        Ok(match w {
            "uniform" => Backend::Uniform,
            "graphic" => Backend::Graphic,
            "linear" => Backend::Linear,
            "explicit" => Backend::Explicit,
            _ => return Err(Error::parse(line, format!("unknown kind '{w}'"))),
        })
    }
}

#[derive(Default)]
struct Collected {
    params: Option<(usize, usize)>,
    edges: Vec<(u64, u64)>,
    prime: Option<u64>,
    rows: Vec<Vec<u64>>,
    ground: Option<Vec<Element>>,
    bases: Vec<Vec<Element>>,
}

impl Collected {
    fn take(&mut self, backend: Backend, line: usize, words: &[&str]) -> Result<()> {
        let (directive, rest) = (words[0], &words[1..]);
        let expected = match directive {
            "params" => Backend::Uniform,
            "edge" => Backend::Graphic,
            "prime" | "row" => Backend::Linear,
            "ground" | "base" => Backend::Explicit,
            _ => return Err(Error::parse(line, format!("unknown directive '{directive}'"))),
        };
        if expected != backend {
            return Err(Error::parse(line, format!("'{directive}' is not allowed for {backend:?} matroids")));
        }
        match directive {
            "params" => {
                let (mut k, mut n) = (None, None);
                for field in rest {
                    match field.split_once('=') {
                        Some(("k", v)) if k.is_none() => k = Some(numbers(line, &[v])?[0] as usize),
                        Some(("n", v)) if n.is_none() => n = Some(numbers(line, &[v])?[0] as usize),
                        _ => return Err(Error::parse(line, format!("bad params field '{field}'"))),
                    }
                }
                match (k, n, self.params) {
                    (Some(k), Some(n), None) => self.params = Some((k, n)),
                    (_, _, Some(_)) => return Err(Error::parse(line, "params given twice")),
                    _ => return Err(Error::parse(line, "params needs k=.. and n=..")),
                }
            }
            "edge" => match numbers(line, rest)?.as_slice() {
                &[u, v] => self.edges.push((u, v)),
                _ => return Err(Error::parse(line, "edge needs two vertices")),
            },
            "prime" => match (numbers(line, rest)?.as_slice(), self.prime) {
                (&[p], None) => self.prime = Some(p),
                _ => return Err(Error::parse(line, "prime needs one number, given once")),
            },
            "row" => self.rows.push(numbers(line, rest)?),
            "ground" => {
                if self.ground.is_some() {
                    return Err(Error::parse(line, "ground given twice"));
                }
                self.ground = Some(numbers(line, rest)?);
            }
            _ => self.bases.push(numbers(line, rest)?),
        }
        Ok(())
    }

    fn finish(self, backend: Backend, line: usize) -> Result<MatroidSpec> {
        Ok(match backend {
            Backend::Uniform => {
                let (k, n) = self.params.ok_or_else(|| Error::parse(line, "uniform matroid without params"))?;
                MatroidSpec::Uniform { k, n }
            }
            Backend::Graphic => MatroidSpec::Graphic { edges: self.edges },
            Backend::Linear => MatroidSpec::Linear {
                prime: self.prime.ok_or_else(|| Error::parse(line, "linear matroid without prime"))?,
                rows: self.rows,
            },
            Backend::Explicit => MatroidSpec::Explicit {
                ground: self.ground.ok_or_else(|| Error::parse(line, "explicit matroid without ground"))?,
                bases: self.bases,
            },
        })
    }
}

/// Parses the matroid format. `kind free` and `kind periodic <backend>`
/// describe finitary matroids; the latter is followed by the component's
/// backend lines.
pub fn parse_matroid_file(text: &str) -> Result<MatroidFile> {
    let mut it = lines(text);
    let (line, words) = it.next().ok_or_else(|| Error::parse(1, "empty matroid file"))?;
    let name = header(line, &words, &["matroid"])?.to_string();
    let (kind_line, words) = it.next().ok_or_else(|| Error::parse(line + 1, "missing 'kind' line"))?;
    enum Kind {
        Free,
        Finite(Backend),
        Periodic(Backend),
    }
    let kind = match words.as_slice() {
        ["kind", "free"] => Kind::Free,
        ["kind", "periodic", b] => Kind::Periodic(Backend::parse(kind_line, b)?),
        ["kind", b] => Kind::Finite(Backend::parse(kind_line, b)?),
        _ => return Err(Error::parse(kind_line, "expected 'kind <uniform|graphic|linear|explicit|free|periodic ..>'")),
    };
    let mut collected = Collected::default();
    for (line, words) in it {
        match kind {
            Kind::Free => return Err(Error::parse(line, format!("unexpected '{}' after kind free", words[0]))),
            Kind::Finite(b) | Kind::Periodic(b) => collected.take(b, line, &words)?,
        }
    }
    let description = match kind {
        Kind::Free => MatroidDescription::Finitary(FinitarySpec::Free),
        Kind::Finite(b) => MatroidDescription::Finite(collected.finish(b, kind_line)?),
        Kind::Periodic(b) => MatroidDescription::Finitary(FinitarySpec::PeriodicDirectSum(collected.finish(b, kind_line)?)),
    };
    Ok(MatroidFile { name, description })
}

fn join(xs: &[u64]) -> String {
    xs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn line_with(word: &str, xs: &[u64]) -> String {
    if xs.is_empty() {
        word.to_string()
    } else {
        format!("{word} {}", join(xs))
    }
}

fn emit_backend(out: &mut String, spec: &MatroidSpec) {
    match spec {
        MatroidSpec::Uniform { k, n } => writeln!(out, "params k={k} n={n}").unwrap(),
        MatroidSpec::Graphic { edges } => {
            for (u, v) in edges {
                writeln!(out, "edge {u} {v}").unwrap();
            }
        }
        MatroidSpec::Linear { prime, rows } => {
            writeln!(out, "prime {prime}").unwrap();
            for r in rows {
                writeln!(out, "{}", line_with("row", r)).unwrap();
            }
        }
        MatroidSpec::Explicit { ground, bases } => {
            writeln!(out, "{}", line_with("ground", ground)).unwrap();
            for b in bases {
                writeln!(out, "{}", line_with("base", b)).unwrap();
            }
        }
    }
}

fn backend_name(spec: &MatroidSpec) -> &'static str {
    match spec {
        MatroidSpec::Uniform { .. } => "uniform",
        MatroidSpec::Graphic { .. } => "graphic",
        MatroidSpec::Linear { .. } => "linear",
        MatroidSpec::Explicit { .. } => "explicit",
    }
}

pub fn emit_matroid_file(name: &str, description: &MatroidDescription) -> String {
    let mut out = format!("matroid {name}\n");
    match description {
        MatroidDescription::Finite(spec) => {
            writeln!(out, "kind {}", backend_name(spec)).unwrap();
            emit_backend(&mut out, spec);
        }
        MatroidDescription::Finitary(FinitarySpec::Free) => out.push_str("kind free\n"),
        MatroidDescription::Finitary(FinitarySpec::PeriodicDirectSum(spec)) => {
            writeln!(out, "kind periodic {}", backend_name(spec)).unwrap();
            emit_backend(&mut out, spec);
        }
    }
    out
}

/// A finite set (`set ...`) or a template representative (`class ...`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Member {
    Set(ElementSet),
    Class(TemplateSet),
}

impl Member {
    pub fn to_template(&self) -> TemplateSet {
        match self {
            Member::Set(s) => TemplateSet::from(s),
            Member::Class(t) => t.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyFile {
    pub name: String,
    pub members: Vec<Member>,
}

impl FamilyFile {
    /// The members as a family of finite sets; template members are rejected.
    pub fn finite_family(&self) -> Result<SetFamily> {
        self.members
            .iter()
            .map(|m| match m {
                Member::Set(s) => Ok(s.clone()),
                Member::Class(_) => Err(Error::Precondition("template member in a finite family".into())),
            })
            .collect()
    }

    pub fn templates(&self) -> Vec<TemplateSet> {
        self.members.iter().map(Member::to_template).collect()
    }
}

fn template_at(line: usize, text: &str) -> Result<TemplateSet> {
    text.parse().map_err(|e: Error| Error::parse(line, e.to_string()))
}

/// Parses `family <name>` (or `sets <name>`) followed by `set ...` and
/// `class <template>` lines.
pub fn parse_family_file(text: &str) -> Result<FamilyFile> {
    let mut it = lines(text);
    let (line, words) = it.next().ok_or_else(|| Error::parse(1, "empty family file"))?;
    let name = header(line, &words, &["family", "sets"])?.to_string();
    let mut members = vec![];
    for (line, words) in it {
        match words[0] {
            "set" => members.push(Member::Set(numbers(line, &words[1..])?.into())),
            "class" => members.push(Member::Class(template_at(line, &words[1..].join(" "))?)),
            other => return Err(Error::parse(line, format!("unknown directive '{other}'"))),
        }
    }
    Ok(FamilyFile { name, members })
}

pub fn emit_family_file(family: &FamilyFile) -> String {
    let mut out = format!("family {}\n", family.name);
    for m in &family.members {
        match m {
            Member::Set(s) => writeln!(out, "{}", line_with("set", &s.to_vec())).unwrap(),
            Member::Class(t) => writeln!(out, "class {t}").unwrap(),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskFile {
    pub name: String,
    pub tasks: Vec<(TemplateSet, TemplateSet)>,
}

/// Parses `tasks <name>` followed by `task <I> | <J>` lines, each side a
/// template or shorthand.
pub fn parse_task_file(text: &str) -> Result<TaskFile> {
    let mut it = lines(text);
    let (line, words) = it.next().ok_or_else(|| Error::parse(1, "empty task file"))?;
    let name = header(line, &words, &["tasks"])?.to_string();
    let mut tasks = vec![];
    for (line, words) in it {
        if words[0] != "task" {
            return Err(Error::parse(line, format!("unknown directive '{}'", words[0])));
        }
        let rest = words[1..].join(" ");
        let (i, j) = rest
            .split_once('|')
            .ok_or_else(|| Error::parse(line, "expected 'task <I> | <J>'"))?;
        tasks.push((template_at(line, i)?, template_at(line, j)?));
    }
    Ok(TaskFile { name, tasks })
}

pub fn emit_task_file(file: &TaskFile) -> String {
    let mut out = format!("tasks {}\n", file.name);
    for (i, j) in &file.tasks {
        writeln!(out, "task {i} | {j}").unwrap();
    }
    out
}
