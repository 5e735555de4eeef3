//! The job description language.
//!
//! A job is a sequence of `key: value` lines; blank lines and lines starting
//! with `#` are ignored:
//!
//! ```text
//! field: Fq(5,1)(x)((y))
//! class(n=2): 1*(x,g) + 1*(x+1,y)
//! verb: index
//! ```
//!
//! Keys: `field`, `class(n=N)` (repeatable), `form` (repeatable), `verb`,
//! `output` (`text` or `json`), and the options `seed`, `samples`, `budget`,
//! `workers`, `n`, `terms`, `max_deg`, `dim`, `place`, `center`, `s`, `t`,
//! `lambda`, `variant`.

use std::fmt;
use std::str::FromStr;

use brauer::field::plane::Point;
use brauer::symbol::BrauerClass;
use brauer::witt::{QuadForm, UBoundVariant};
use brauer::{Error, FieldTower};

/// A library capability exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verb {
    Residues,
    Ramlocus,
    Exponent,
    Index,
    Iszero,
    Split,
    Scan,
    Witt,
    Albert,
    Surgery,
    SplitSearch,
    Reciprocity,
    Kato,
    UBound,
}

impl Verb {
    pub const ALL: [Verb; 14] = [
        Verb::Residues,
        Verb::Ramlocus,
        Verb::Exponent,
        Verb::Index,
        Verb::Iszero,
        Verb::Split,
        Verb::Scan,
        Verb::Witt,
        Verb::Albert,
        Verb::Surgery,
        Verb::SplitSearch,
        Verb::Reciprocity,
        Verb::Kato,
        Verb::UBound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Verb::Residues => "residues",
            Verb::Ramlocus => "ramlocus",
            Verb::Exponent => "exponent",
            Verb::Index => "index",
            Verb::Iszero => "iszero",
            Verb::Split => "split",
            Verb::Scan => "scan",
            Verb::Witt => "witt",
            Verb::Albert => "albert",
            Verb::Surgery => "surgery",
            Verb::SplitSearch => "split-search",
            Verb::Reciprocity => "reciprocity",
            Verb::Kato => "kato",
            Verb::UBound => "u-bound",
        }
    }

    /// Whether the verb needs a field declaration.
    pub fn needs_field(self) -> bool {
        self != Verb::UBound
    }
}

impl fmt::Display for Verb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Verb {
    type Err = String;
    fn from_str(s: &str) -> Result<Verb, String> {
        Verb::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| format!("unknown verb `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputMode {
    #[default]
    Text,
    Json,
}

/// Verb options. Unset options take verb-specific defaults when the job runs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub budget: Option<usize>,
    pub workers: Option<usize>,
    /// Modulus for generated classes.
    pub n: Option<u32>,
    /// Symbols per generated class.
    pub terms: Option<usize>,
    /// Degree bound for generated entries.
    pub max_deg: Option<u32>,
    /// Form dimension for Witt scans.
    pub dim: Option<usize>,
    /// A place, in the syntax of the field's places.
    pub place: Option<String>,
    pub center: Option<Point>,
    /// Local parameters for surgery, as lines.
    pub s: Option<String>,
    pub t: Option<String>,
    pub lambda: Option<Vec<u64>>,
    pub variant: Option<UBoundVariant>,
}

/// A parsed, validated job.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub field: Option<FieldTower>,
    pub classes: Vec<BrauerClass>,
    pub forms: Vec<QuadForm>,
    pub verb: Verb,
    pub options: Options,
    pub output: OutputMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JobErrorKind {
    Syntax,
    Semantic,
}

/// A diagnostic pointing at a 1-based line and column of the job text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobError {
    pub kind: JobErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for JobError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            JobErrorKind::Syntax => "syntax error",
            JobErrorKind::Semantic => "semantic error",
        };
        write!(f, "{kind} at line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for JobError {}

/// One `key: value` line with its position.
struct Entry<'a> {
    line: usize,
    key: &'a str,
    key_col: usize,
    value: &'a str,
    value_col: usize,
}

impl Entry<'_> {
    fn syntax(&self, message: impl Into<String>) -> JobError {
        JobError { kind: JobErrorKind::Syntax, line: self.line, column: self.value_col, message: message.into() }
    }
    fn semantic(&self, message: impl Into<String>) -> JobError {
        JobError { kind: JobErrorKind::Semantic, line: self.line, column: self.value_col, message: message.into() }
    }
    /// Map a library error at byte offset `base` of the value.
    fn library(&self, e: Error, base: usize) -> JobError {
        match e {
            Error::Parse { pos, msg } => {
                let kind = if msg.starts_with("undeclared variable") || msg == "division by zero" {
                    JobErrorKind::Semantic
                } else {
                    JobErrorKind::Syntax
                };
                let column = self.value_col + self.value[..(base + pos).min(self.value.len())].chars().count();
                JobError { kind, line: self.line, column, message: msg }
            }
            other => self.semantic(other.to_string()),
        }
    }
    fn number<T: FromStr>(&self) -> Result<T, JobError> {
        self.value.parse().map_err(|_| self.syntax(format!("`{}` expects an unsigned integer", self.key)))
    }
}

fn split_lines(input: &str) -> Result<Vec<Entry<'_>>, JobError> {
    let mut out = Vec::new();
    for (i, raw) in input.lines().enumerate() {
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let key_col = raw.len() - trimmed.len() + 1;
        let colon = find_key_colon(trimmed).ok_or(JobError {
            kind: JobErrorKind::Syntax,
            line: i + 1,
            column: key_col,
            message: "expected `key: value`".into(),
        })?;
        let key = trimmed[..colon].trim_end();
        let rest = &trimmed[colon + 1..];
        let value = rest.trim();
        let lead = rest.len() - rest.trim_start().len();
        let value_col = key_col + trimmed[..colon + 1].chars().count() + rest[..lead].chars().count();
        out.push(Entry { line: i + 1, key, key_col, value, value_col });
    }
    Ok(out)
}

/// The colon ending the key; `class(n=2):` has no colon inside its key.
fn find_key_colon(s: &str) -> Option<usize> {
    let end = s.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '(' || c == ')' || c == '=' || c == ' '))?;
    (s.as_bytes()[end] == b':').then_some(end)
}

fn class_modulus(e: &Entry) -> Result<Option<u32>, JobError> {
    let Some(inner) = e.key.strip_prefix("class") else { return Ok(None) };
    let bad = || JobError { kind: JobErrorKind::Syntax, line: e.line, column: e.key_col, message: "expected `class(n=N)`".into() };
    let inner = inner.trim().strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
    let (k, v) = inner.split_once('=').ok_or_else(bad)?;
    if k.trim() != "n" {
        return Err(bad());
    }
    v.trim().parse().map(Some).map_err(|_| bad())
}

fn parse_point(e: &Entry) -> Result<Point, JobError> {
    let bad = || e.syntax("expected a point `(x, y)` with integer coordinates");
    let inner = e.value.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
    let (x, y) = inner.split_once(',').ok_or_else(bad)?;
    Ok(Point { x: x.trim().parse().map_err(|_| bad())?, y: y.trim().parse().map_err(|_| bad())? })
}

/// Parse and validate a job.
pub fn parse_job(input: &str) -> Result<JobSpec, JobError> {
    let entries = split_lines(input)?;
    let mut field_entry = None;
    let mut verb_entry = None;
    let mut output = None;
    let mut options = Options::default();
    let mut seen = std::collections::HashSet::new();
    for e in &entries {
        let repeatable = e.key == "form" || e.key.starts_with("class");
        if !repeatable && !seen.insert(e.key) {
            return Err(JobError { kind: JobErrorKind::Semantic, line: e.line, column: e.key_col, message: format!("duplicate key `{}`", e.key) });
        }
        match e.key {
            "field" => field_entry = Some(e),
            "verb" => verb_entry = Some(e),
            "output" => {
                output = Some(match e.value {
                    "text" => OutputMode::Text,
                    "json" => OutputMode::Json,
                    _ => return Err(e.syntax("output must be `text` or `json`")),
                })
            }
            "seed" => options.seed = Some(e.number()?),
            "samples" => options.samples = Some(e.number()?),
            "budget" => options.budget = Some(e.number()?),
            "workers" => options.workers = Some(e.number()?),
            "n" => options.n = Some(e.number()?),
            "terms" => options.terms = Some(e.number()?),
            "max_deg" => options.max_deg = Some(e.number()?),
            "dim" => options.dim = Some(e.number()?),
            "place" => options.place = Some(e.value.to_string()),
            "s" => options.s = Some(e.value.to_string()),
            "t" => options.t = Some(e.value.to_string()),
            "center" => options.center = Some(parse_point(e)?),
            "lambda" => {
                let ls = e.value.split(',').map(|x| x.trim().parse::<u64>()).collect::<Result<Vec<_>, _>>();
                options.lambda = Some(ls.map_err(|_| e.syntax("lambda expects comma-separated unsigned integers"))?);
            }
            "variant" => options.variant = Some(e.value.parse().map_err(|_| e.syntax("variant must be `basic` or `improved`"))?),
            "form" => {}
            k if k.starts_with("class") => {
                class_modulus(e)?;
            }
            _ => {
                return Err(JobError { kind: JobErrorKind::Syntax, line: e.line, column: e.key_col, message: format!("unknown key `{}`", e.key) })
            }
        }
    }
    let verb_entry = verb_entry.ok_or(JobError {
        kind: JobErrorKind::Semantic,
        line: input.lines().count().max(1),
        column: 1,
        message: "missing `verb:` line".into(),
    })?;
    let verb: Verb = verb_entry.value.parse().map_err(|m: String| verb_entry.syntax(m))?;
    let field = match field_entry {
        Some(e) => Some(FieldTower::parse(e.value).map_err(|err| e.library(err, 0))?),
        None => None,
    };
    let mut classes = Vec::new();
    let mut forms = Vec::new();
    for e in &entries {
        let is_form = e.key == "form";
        let modulus = if is_form { None } else { class_modulus(e)? };
        if !is_form && modulus.is_none() {
            continue;
        }
        let Some(k) = &field else {
            return Err(e.semantic("declare `field:` before classes and forms"));
        };
        if let Some(n) = modulus {
            classes.push(BrauerClass::parse(k, n, e.value).map_err(|err| e.library(err, 0))?);
        } else {
            let (body, base) = match e.value.strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
                Some(b) => (b, 1),
                None => (e.value, 0),
            };
            forms.push(QuadForm::parse(k, body).map_err(|err| e.library(err, base))?);
        }
    }
    if let (Some(n), Some(k)) = (options.n, &field) {
        k.check_roots_of_unity(n).map_err(|err| {
            let e = entries.iter().find(|e| e.key == "n").unwrap();
            e.semantic(err.to_string())
        })?;
    }
    if verb.needs_field() && field.is_none() {
        return Err(verb_entry.semantic(format!("verb `{verb}` needs a `field:` declaration")));
    }
    Ok(JobSpec { field, classes, forms, verb, options, output: output.unwrap_or_default() })
}

impl fmt::Display for JobSpec {
    /// The canonical job text; parsing it yields an equal job.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = &self.field {
            writeln!(f, "field: {k}")?;
        }
        for a in &self.classes {
            writeln!(f, "class(n={}): {a}", a.n())?;
        }
        for q in &self.forms {
            writeln!(f, "form: {q}")?;
        }
        writeln!(f, "verb: {}", self.verb)?;
        let o = &self.options;
        let mut opt = |k: &str, v: Option<String>| v.map_or(Ok(()), |v| writeln!(f, "{k}: {v}"));
        opt("seed", o.seed.map(|x| x.to_string()))?;
        opt("samples", o.samples.map(|x| x.to_string()))?;
        opt("budget", o.budget.map(|x| x.to_string()))?;
        opt("workers", o.workers.map(|x| x.to_string()))?;
        opt("n", o.n.map(|x| x.to_string()))?;
        opt("terms", o.terms.map(|x| x.to_string()))?;
        opt("max_deg", o.max_deg.map(|x| x.to_string()))?;
        opt("dim", o.dim.map(|x| x.to_string()))?;
        opt("place", o.place.clone())?;
        opt("center", o.center.map(|p| format!("({}, {})", p.x, p.y)))?;
        opt("s", o.s.clone())?;
        opt("t", o.t.clone())?;
        opt("lambda", o.lambda.as_ref().map(|l| l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))?;
        opt("variant", o.variant.map(|v| match v {
            UBoundVariant::Basic => "basic".to_string(),
            UBoundVariant::Improved => "improved".to_string(),
        }))?;
        if self.output == OutputMode::Json {
            writeln!(f, "output: json")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BIQUATERNION_JOB: &str = "field: Fq(5,1)(x)((y))\nclass(n=2): 1*(x,g) + 1*(x+1,y)\nverb: index";

    #[test]
    fn parses_the_biquaternion_job() {
        let j = parse_job(BIQUATERNION_JOB).unwrap();
        assert_eq!(j.verb, Verb::Index);
        assert_eq!(j.classes.len(), 1);
        assert_eq!(j.classes[0].n(), 2);
        assert_eq!(j.field.as_ref().unwrap().to_string(), "Fq(5,1)(x)((y))");
    }

    #[test]
    fn round_trip() {
        let src = "# comment\nfield: Fq(7,1)(t)\nclass(n=3): (t, g) - 2*(t+1, t^2+3)\nform: <1, -g, t>\nverb: scan\nseed: 4\nsamples: 10\nbudget: 99\nworkers: 2\nn: 3\nterms: 2\nmax_deg: 3\ndim: 4\nplace: t\ncenter: (0, 1)\ns: x\nt: y\nlambda: 1,2,1\nvariant: improved\noutput: json\n";
        let j = parse_job(src).unwrap();
        let again = parse_job(&j.to_string()).unwrap();
        assert_eq!(j, again);
        assert_eq!(j.to_string(), again.to_string());
    }

    #[test]
    fn scan_without_classes_is_valid() {
        let j = parse_job("field: Fq(5,1)(t)\nverb: scan\nn: 2").unwrap();
        assert!(j.classes.is_empty());
    }

    #[test]
    fn non_prime_base_is_semantic() {
        let e = parse_job("field: Fq(4,1)\nverb: index").unwrap_err();
        assert_eq!(e.kind, JobErrorKind::Semantic);
        assert_eq!((e.line, e.column), (1, 8));
    }

    #[test]
    fn undeclared_variable_is_located() {
        let e = parse_job("field: Fq(5,1)(x)\nclass(n=2): (x, z)\nverb: index").unwrap_err();
        assert_eq!(e.kind, JobErrorKind::Semantic);
        assert_eq!((e.line, e.column), (2, 17));
    }

    #[test]
    fn modulus_must_divide_q_minus_one() {
        let e = parse_job("field: Fq(5,1)(x)\nclass(n=3): (x, g)\nverb: index").unwrap_err();
        assert_eq!(e.kind, JobErrorKind::Semantic);
        let e = parse_job("field: Fq(5,1)(x)\nverb: scan\nn: 3").unwrap_err();
        assert_eq!((e.kind, e.line), (JobErrorKind::Semantic, 3));
    }

    #[test]
    fn syntax_errors_are_located() {
        let e = parse_job("field: Fq(5,1)(x)\nclass(n=2): (x, g\nverb: index").unwrap_err();
        assert_eq!((e.kind, e.line), (JobErrorKind::Syntax, 2));
        let e = parse_job("field Fq(5,1)(x)\nverb: index").unwrap_err();
        assert_eq!((e.kind, e.line, e.column), (JobErrorKind::Syntax, 1, 1));
        let e = parse_job("field: Fq(5,1)(x)\nverb: divide").unwrap_err();
        assert_eq!((e.kind, e.line, e.column), (JobErrorKind::Syntax, 2, 7));
        assert!(parse_job("field: Fq(5,1)(x)\nseed: -1\nverb: scan").is_err());
    }

    #[test]
    fn verbs_round_trip_by_name() {
        for v in Verb::ALL {
            assert_eq!(v.name().parse::<Verb>().unwrap(), v);
        }
    }
}
