//! The line-oriented extension description format.
//!
//! ```text
//! kernel: Z^2
//! quotient: Z
//! action t -> [[2,1],[1,1]]
//! ```
//!
//! The first two lines give `K` and `Q`; each `action` line gives the image
//! of one quotient generator, in generator order, and names it. Blank lines
//! and `#` comments are ignored. With no action lines the action is trivial.
//! Kernels that never consult the action (finite, torsion, trivial) still
//! have their action lines checked for syntax, and nothing else.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;

use crate::analyzer::{AutElement, ExtensionSpec, KernelDesc, SpecError};
use crate::catalog::{FreeAut, GroupDesc, Letter, Perm, PermGroup, Word};
use crate::IntMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagnosticCode {
    /// The text does not match the grammar.
    Syntax,
    /// The text parses but describes no valid extension.
    Validation,
}

impl DiagnosticCode {
    pub fn tag(self) -> &'static str {
        match self {
            DiagnosticCode::Syntax => "syntax",
            DiagnosticCode::Validation => "validation",
        }
    }
}

/// A located parse or validation error. Lines and columns are 1-based and
/// count characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {} error: {}",
            self.line,
            self.column,
            self.code.tag(),
            self.message
        )
    }
}

impl std::error::Error for Diagnostic {}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        code: DiagnosticCode::Syntax,
        line,
        column,
        message: message.into(),
    }
}

fn validation(line: usize, column: usize, message: impl Into<String>) -> Diagnostic {
    Diagnostic {
        code: DiagnosticCode::Validation,
        line,
        column,
        message: message.into(),
    }
}

/// Character cursor over one line.
struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(src: &str, line: usize) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn error(&mut self, expected: &str) -> Diagnostic {
        self.skip_ws();
        let found = match self.chars.get(self.pos) {
            Some(c) => format!("'{c}'"),
            None => "end of line".to_string(),
        };
        syntax(self.line, self.column(), format!("expected {expected}, found {found}"))
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        let n = s.chars().count();
        if self.chars.len() >= self.pos + n && self.chars[self.pos..self.pos + n].iter().copied().eq(s.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), Diagnostic> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(&format!("'{s}'")))
        }
    }

    /// Keyword: `s` not followed by an identifier character.
    fn eat_keyword(&mut self, s: &str) -> bool {
        let save = self.pos;
        if self.eat(s) && !self.chars.get(self.pos).is_some_and(|c| is_ident_char(*c)) {
            return true;
        }
        self.pos = save;
        false
    }

    fn ident(&mut self) -> Result<(String, usize), Diagnostic> {
        self.skip_ws();
        let col = self.column();
        match self.chars.get(self.pos) {
            Some(c) if c.is_alphabetic() || *c == '_' => {}
            _ => return Err(self.error("a name")),
        }
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| is_ident_char(*c)) {
            self.pos += 1;
        }
        Ok((self.chars[start..self.pos].iter().collect(), col))
    }

    fn int(&mut self) -> Result<(BigInt, usize), Diagnostic> {
        self.skip_ws();
        let col = self.column();
        let start = self.pos;
        if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return Err(self.error("an integer"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        Ok((text.parse().expect("digits parse"), col))
    }

    fn usize(&mut self, what: &str) -> Result<(usize, usize), Diagnostic> {
        let (n, col) = self.int()?;
        match usize::try_from(&n) {
            Ok(v) => Ok((v, col)),
            Err(_) => Err(syntax(
                self.line,
                col,
                format!("{what} must be a non-negative integer, found {n}"),
            )),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// A group as written, before validation.
enum GroupSyntax {
    Abelian {
        rank: usize,
        torsion: Vec<u64>,
        column: usize,
    },
    Free {
        names: Vec<String>,
        column: usize,
    },
    Finite {
        generators: Vec<Vec<Vec<usize>>>,
        column: usize,
    },
    Product(Vec<GroupSyntax>),
}

fn parse_group(c: &mut Cursor, allow_product: bool) -> Result<GroupSyntax, Diagnostic> {
    c.skip_ws();
    let column = c.column();
    if c.eat_keyword("trivial") {
        return Ok(GroupSyntax::Abelian {
            rank: 0,
            torsion: Vec::new(),
            column,
        });
    }
    if c.eat_keyword("free") {
        c.expect("(")?;
        let mut names = vec![c.ident()?.0];
        while c.eat(",") {
            names.push(c.ident()?.0);
        }
        c.expect(")")?;
        return Ok(GroupSyntax::Free { names, column });
    }
    if c.eat_keyword("finite") {
        if !c.eat_keyword("perm") {
            return Err(c.error("'perm'"));
        }
        c.expect("(")?;
        let mut generators = vec![parse_cycles(c)?];
        while c.eat(";") {
            generators.push(parse_cycles(c)?);
        }
        c.expect(")")?;
        return Ok(GroupSyntax::Finite { generators, column });
    }
    if allow_product && c.eat_keyword("product") {
        c.expect("(")?;
        let mut factors = vec![parse_group(c, true)?];
        while c.eat(",") {
            factors.push(parse_group(c, true)?);
        }
        c.expect(")")?;
        return Ok(GroupSyntax::Product(factors));
    }
    if c.peek() == Some('Z') {
        return parse_abelian(c, column);
    }
    let expected = if allow_product {
        "a group (Z^n, Z/d, free(..), finite perm(..), product(..) or trivial)"
    } else {
        "a group (Z^n, Z/d, free(..), finite perm(..) or trivial)"
    };
    Err(c.error(expected))
}

/// `Z`, `Z^n`, `Z^n + Z/d + ...` or `Z/d + ...`.
fn parse_abelian(c: &mut Cursor, column: usize) -> Result<GroupSyntax, Diagnostic> {
    let mut rank = 0;
    let mut torsion = Vec::new();
    c.expect("Z")?;
    if c.eat("/") {
        torsion.push(parse_divisor(c)?);
    } else if c.eat("^") {
        rank = c.usize("rank")?.0;
    } else {
        rank = 1;
    }
    while c.eat("+") {
        c.expect("Z")?;
        c.expect("/")?;
        torsion.push(parse_divisor(c)?);
    }
    Ok(GroupSyntax::Abelian { rank, torsion, column })
}

fn parse_divisor(c: &mut Cursor) -> Result<u64, Diagnostic> {
    let (n, col) = c.int()?;
    u64::try_from(&n).map_err(|_| syntax(c.line, col, format!("divisor must be a positive integer, found {n}")))
}

/// `(1 2)(3 4)` or `()` for the identity.
fn parse_cycles(c: &mut Cursor) -> Result<Vec<Vec<usize>>, Diagnostic> {
    let mut cycles = Vec::new();
    c.expect("(")?;
    loop {
        if c.eat(")") {
            break;
        }
        let mut cycle = Vec::new();
        while c.peek().is_some_and(|ch| ch.is_ascii_digit() || ch == '-') {
            let (p, col) = c.usize("point")?;
            if p == 0 {
                return Err(syntax(c.line, col, "permutation points start at 1"));
            }
            cycle.push(p);
        }
        if cycle.is_empty() {
            return Err(c.error("a point or ')'"));
        }
        c.expect(")")?;
        cycles.push(cycle);
        if !c.eat("(") {
            break;
        }
    }
    Ok(cycles)
}

/// An `action` line as written.
struct ActionSyntax {
    line: usize,
    label: String,
    label_column: usize,
    value_column: usize,
    value: ActionValue,
}

enum ActionValue {
    Matrix(Vec<Vec<BigInt>>),
    Map(Vec<MapEntry>),
}

struct MapEntry {
    name: String,
    column: usize,
    word: Vec<(String, usize, i64)>,
}

fn parse_action(c: &mut Cursor) -> Result<ActionSyntax, Diagnostic> {
    let (label, label_column) = c.ident()?;
    c.expect("->")?;
    c.skip_ws();
    let value_column = c.column();
    let value = match c.peek() {
        Some('[') => ActionValue::Matrix(parse_matrix(c)?),
        Some('(') => ActionValue::Map(parse_map(c)?),
        _ => return Err(c.error("a matrix '[[..]]' or a map '(a -> ..)'")),
    };
    Ok(ActionSyntax {
        line: c.line,
        label,
        label_column,
        value_column,
        value,
    })
}

fn parse_matrix(c: &mut Cursor) -> Result<Vec<Vec<BigInt>>, Diagnostic> {
    c.expect("[")?;
    let mut rows = Vec::new();
    if c.eat("]") {
        return Ok(rows);
    }
    loop {
        c.expect("[")?;
        let mut row = Vec::new();
        if !c.eat("]") {
            loop {
                row.push(c.int()?.0);
                if c.eat("]") {
                    break;
                }
                c.expect(",")?;
            }
        }
        rows.push(row);
        if c.eat("]") {
            break;
        }
        c.expect(",")?;
    }
    Ok(rows)
}

fn parse_map(c: &mut Cursor) -> Result<Vec<MapEntry>, Diagnostic> {
    c.expect("(")?;
    let mut entries = Vec::new();
    loop {
        let (name, column) = c.ident()?;
        c.expect("->")?;
        let word = parse_word(c)?;
        entries.push(MapEntry { name, column, word });
        if c.eat(")") {
            break;
        }
        c.expect(",")?;
    }
    Ok(entries)
}

/// Factors `NAME` or `NAME^k`, separated by spaces or `*`; `1` is the empty
/// word.
fn parse_word(c: &mut Cursor) -> Result<Vec<(String, usize, i64)>, Diagnostic> {
    if c.peek() == Some('1') {
        c.int()?;
        return Ok(Vec::new());
    }
    let mut factors = Vec::new();
    loop {
        let (name, col) = c.ident()?;
        let mut exp = 1;
        if c.eat("^") {
            let (n, ecol) = c.int()?;
            exp = i64::try_from(&n).map_err(|_| syntax(c.line, ecol, format!("exponent {n} is too large")))?;
        }
        factors.push((name, col, exp));
        c.eat("*");
        match c.peek() {
            Some(ch) if ch.is_alphabetic() || ch == '_' => {}
            _ => break,
        }
    }
    Ok(factors)
}

/// Parses and validates one extension description.
pub fn parse_extension(text: &str) -> Result<ExtensionSpec, Diagnostic> {
    let mut kernel = None;
    let mut quotient = None;
    let mut actions = Vec::new();
    let mut last_line = 1;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        last_line = line_no;
        let mut c = Cursor::new(content, line_no);
        if kernel.is_none() {
            if !c.eat_keyword("kernel") {
                return Err(c.error("'kernel:'"));
            }
            c.expect(":")?;
            kernel = Some((parse_group(&mut c, false)?, line_no));
        } else if quotient.is_none() {
            if !c.eat_keyword("quotient") {
                return Err(c.error("'quotient:'"));
            }
            c.expect(":")?;
            quotient = Some((parse_group(&mut c, true)?, line_no));
        } else {
            if !c.eat_keyword("action") {
                return Err(c.error("'action'"));
            }
            actions.push(parse_action(&mut c)?);
        }
        if !c.at_end() {
            return Err(c.error("end of line"));
        }
    }
    let Some(kernel) = kernel else {
        return Err(syntax(last_line, 1, "missing 'kernel:' line"));
    };
    let Some(quotient) = quotient else {
        return Err(syntax(last_line + 1, 1, "missing 'quotient:' line"));
    };
    build(kernel, quotient, actions, last_line)
}

fn build_kernel(k: GroupSyntax, line: usize) -> Result<KernelDesc, Diagnostic> {
    match k {
        GroupSyntax::Abelian { rank, torsion, column } => {
            GroupDesc::fg_abelian(rank, torsion.clone()).map_err(|e| validation(line, column, e.to_string()))?;
            Ok(KernelDesc::Abelian { rank, torsion })
        }
        GroupSyntax::Free { names, column } => {
            check_distinct(&names, line, column)?;
            Ok(KernelDesc::Free { names })
        }
        GroupSyntax::Finite { generators, column } => {
            Ok(KernelDesc::Finite(build_perm_group(&generators, line, column)?))
        }
        GroupSyntax::Product(_) => unreachable!("kernels are never products"),
    }
}

fn build_quotient(q: GroupSyntax, line: usize) -> Result<GroupDesc, Diagnostic> {
    match q {
        GroupSyntax::Abelian { rank, torsion, column } => {
            GroupDesc::fg_abelian(rank, torsion).map_err(|e| validation(line, column, e.to_string()))
        }
        GroupSyntax::Free { names, column } => {
            check_distinct(&names, line, column)?;
            GroupDesc::free(names).map_err(|e| validation(line, column, e.to_string()))
        }
        GroupSyntax::Finite { generators, column } => {
            Ok(GroupDesc::Finite(build_perm_group(&generators, line, column)?))
        }
        GroupSyntax::Product(fs) => {
            let factors = fs
                .into_iter()
                .map(|f| build_quotient(f, line))
                .collect::<Result<Vec<_>, _>>()?;
            GroupDesc::product(factors).map_err(|e| validation(line, 1, e.to_string()))
        }
    }
}

fn check_distinct(names: &[String], line: usize, column: usize) -> Result<(), Diagnostic> {
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(validation(line, column, format!("generator name '{n}' is repeated")));
        }
    }
    Ok(())
}

fn build_perm_group(generators: &[Vec<Vec<usize>>], line: usize, column: usize) -> Result<PermGroup, Diagnostic> {
    let degree = generators.iter().flatten().flatten().copied().max().unwrap_or(1);
    let perms = generators
        .iter()
        .map(|g| Perm::from_cycles(degree, g))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| validation(line, column, e.to_string()))?;
    PermGroup::generate(degree, perms).map_err(|e| validation(line, column, e.to_string()))
}

fn build(
    (kernel, kernel_line): (GroupSyntax, usize),
    (quotient, quotient_line): (GroupSyntax, usize),
    actions: Vec<ActionSyntax>,
    last_line: usize,
) -> Result<ExtensionSpec, Diagnostic> {
    let kernel = build_kernel(kernel, kernel_line)?;
    let quotient = build_quotient(quotient, quotient_line)?;
    let ngen = quotient.generator_count();

    let mut seen = HashSet::new();
    for a in &actions {
        if !seen.insert(a.label.as_str()) {
            return Err(validation(
                a.line,
                a.label_column,
                format!("generator label '{}' is repeated", a.label),
            ));
        }
    }

    if !kernel.uses_action() {
        return ExtensionSpec::new(kernel, quotient, None, Vec::new())
            .map_err(|e| validation(last_line, 1, e.to_string()));
    }

    if actions.is_empty() {
        let id = match &kernel {
            KernelDesc::Abelian { rank, .. } => AutElement::Matrix(IntMatrix::identity(*rank)),
            KernelDesc::Free { names } => AutElement::Free(FreeAut::identity(names.len())),
            KernelDesc::Finite(_) => unreachable!("finite kernels ignore the action"),
        };
        return ExtensionSpec::new(kernel, quotient, None, vec![id; ngen])
            .map_err(|e| validation(last_line, 1, e.to_string()));
    }

    if actions.len() != ngen {
        let (line, col) = match actions.get(ngen) {
            Some(extra) => (extra.line, 1),
            None => (last_line, 1),
        };
        return Err(validation(
            line,
            col,
            format!(
                "expected {ngen} action lines (one per quotient generator), found {}",
                actions.len()
            ),
        ));
    }

    let mut values = Vec::with_capacity(ngen);
    for a in &actions {
        values.push(build_action(&kernel, a)?);
    }
    let labels: Vec<String> = actions.iter().map(|a| a.label.clone()).collect();
    ExtensionSpec::new(kernel, quotient, Some(labels), values).map_err(|e| locate_spec_error(e, &actions))
}

fn build_action(kernel: &KernelDesc, a: &ActionSyntax) -> Result<AutElement, Diagnostic> {
    match (&a.value, kernel) {
        (ActionValue::Matrix(rows), _) => {
            let cols = rows.first().map_or(0, Vec::len);
            if rows.iter().any(|r| r.len() != cols) {
                return Err(validation(a.line, a.value_column, "matrix rows have different lengths"));
            }
            if rows.is_empty() || cols == 0 {
                return Err(validation(a.line, a.value_column, "empty matrix"));
            }
            let m =
                IntMatrix::from_rows(rows.clone()).map_err(|e| validation(a.line, a.value_column, e.to_string()))?;
            Ok(AutElement::Matrix(m))
        }
        (ActionValue::Map(entries), KernelDesc::Free { names }) => {
            let mut images: Vec<Option<Word>> = vec![None; names.len()];
            for e in entries {
                let Some(i) = names.iter().position(|n| *n == e.name) else {
                    return Err(validation(
                        a.line,
                        e.column,
                        format!("'{}' is not a kernel generator", e.name),
                    ));
                };
                if images[i].is_some() {
                    return Err(validation(
                        a.line,
                        e.column,
                        format!("image of '{}' given twice", e.name),
                    ));
                }
                let mut letters = Vec::new();
                for (name, col, exp) in &e.word {
                    let Some(j) = names.iter().position(|n| n == name) else {
                        return Err(validation(a.line, *col, format!("'{name}' is not a kernel generator")));
                    };
                    let l = Letter::new(j, *exp < 0);
                    for _ in 0..exp.unsigned_abs() {
                        letters.push(l);
                    }
                }
                images[i] = Some(Word::new(&letters));
            }
            let images = images
                .into_iter()
                .enumerate()
                .map(|(i, w)| w.unwrap_or_else(|| Word::generator(i)))
                .collect();
            FreeAut::new(names.len(), images)
                .map(AutElement::Free)
                .map_err(|e| validation(a.line, a.value_column, e.to_string()))
        }
        (ActionValue::Map(_), _) => Err(validation(
            a.line,
            a.value_column,
            format!("action for generator {}: expected a matrix", a.label),
        )),
    }
}

fn locate_spec_error(e: SpecError, actions: &[ActionSyntax]) -> Diagnostic {
    let at = e
        .generator()
        .and_then(|g| actions.iter().find(|a| a.label == g))
        .map(|a| (a.line, a.value_column));
    let (line, col) = at.unwrap_or_else(|| actions.first().map_or((1, 1), |a| (a.line, a.label_column)));
    validation(line, col, e.to_string())
}

/// Canonical text for a spec; parsing it gives back an equal spec.
pub fn print_extension(spec: &ExtensionSpec) -> String {
    let mut out = String::new();
    out.push_str("kernel: ");
    out.push_str(&print_kernel(spec.kernel()));
    out.push('\n');
    out.push_str("quotient: ");
    out.push_str(&print_group(spec.quotient()));
    out.push('\n');
    let kernel_names = match spec.kernel() {
        KernelDesc::Free { names } => names.as_slice(),
        _ => &[],
    };
    for (label, a) in spec.labels().iter().zip(spec.action()) {
        out.push_str(&format!("action {label} -> {}\n", print_action(a, kernel_names)));
    }
    out
}

fn print_abelian(rank: usize, torsion: &[u64]) -> String {
    let mut parts = Vec::new();
    match rank {
        0 => {}
        1 => parts.push("Z".to_string()),
        n => parts.push(format!("Z^{n}")),
    }
    parts.extend(torsion.iter().map(|d| format!("Z/{d}")));
    if parts.is_empty() {
        "trivial".to_string()
    } else {
        parts.join(" + ")
    }
}

fn print_perm_group(g: &PermGroup) -> String {
    let gens: Vec<String> = g.generators().iter().map(ToString::to_string).collect();
    format!("finite perm({})", gens.join(";"))
}

fn print_kernel(k: &KernelDesc) -> String {
    match k {
        KernelDesc::Abelian { rank, torsion } => print_abelian(*rank, torsion),
        KernelDesc::Free { names } => format!("free({})", names.join(",")),
        KernelDesc::Finite(g) => print_perm_group(g),
    }
}

fn print_group(q: &GroupDesc) -> String {
    match q {
        GroupDesc::Finite(g) => print_perm_group(g),
        GroupDesc::FgAbelian { rank, torsion } => print_abelian(*rank, torsion),
        GroupDesc::Free { names, .. } => format!("free({})", names.join(",")),
        GroupDesc::Product(fs) => {
            let parts: Vec<String> = fs.iter().map(print_group).collect();
            format!("product({})", parts.join(","))
        }
    }
}

fn print_action(a: &AutElement, kernel_names: &[String]) -> String {
    match a {
        AutElement::Matrix(m) => {
            let rows: Vec<String> = m
                .row_iter()
                .map(|r| {
                    let xs: Vec<String> = r.iter().map(ToString::to_string).collect();
                    format!("[{}]", xs.join(","))
                })
                .collect();
            format!("[{}]", rows.join(","))
        }
        AutElement::Free(f) => {
            let parts: Vec<String> = f
                .images()
                .iter()
                .enumerate()
                .map(|(i, w)| format!("{} -> {}", kernel_names[i], w.display_with(kernel_names)))
                .collect();
            format!("({})", parts.join(", "))
        }
    }
}
