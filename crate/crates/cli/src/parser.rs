//! Recursive-descent parser and semantic elaboration for model files.

use std::collections::BTreeMap;

use jetham_core::geom::{Chart, Connection, Fibration, SectionSpec};
use jetham_core::ham::{HamiltonianSpec, LegendreChart};
use jetham_core::symcore::{CoordResolver, CoordinateId, Expr};

use crate::lexer::{lex, Pos, Tok, Token};
use crate::model::{ModelFile, ParseError, SpannedTask, Task};

pub fn parse_model(input: &str) -> Result<ModelFile, ParseError> {
    let tokens = lex(input).map_err(|e| ParseError::new(e.pos, e.message))?;
    Parser::new(tokens).model()
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

#[derive(Debug, Default)]
struct BundleBlock {
    n: Option<(usize, Pos)>,
    m: Option<(usize, Pos)>,
    base: Option<Vec<String>>,
    fiber: Option<Vec<String>>,
    theta: Option<String>,
    parameters: Vec<String>,
    pos: Option<Pos>,
}

type SectionStmts = Vec<(String, Pos, Syn)>;
type ComponentStmts = Vec<(String, Pos, String, Pos, Syn)>;

/// Expression syntax tree with positions, folded against the chart later.
#[derive(Debug, Clone)]
enum Syn {
    Int(i64),
    Name(String, Pos),
    Add(Box<Syn>, Box<Syn>),
    Sub(Box<Syn>, Box<Syn>),
    Mul(Box<Syn>, Box<Syn>),
    Div(Box<Syn>, Box<Syn>, Pos),
    Neg(Box<Syn>),
    Pow(Box<Syn>, u32),
}

impl Parser {
    fn new(tokens: Vec<Token>) -> Self {
        Parser { tokens, at: 0 }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.at]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn skip_newlines(&mut self) {
        while matches!(self.peek().tok, Tok::Newline) {
            self.next();
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        let t = self.next();
        if t.tok == tok {
            Ok(t)
        } else {
            Err(ParseError::new(
                t.pos,
                format!("expected {tok}, found {}", t.tok),
            ))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Pos), ParseError> {
        let t = self.next();
        match t.tok {
            Tok::Ident(s) => Ok((s, t.pos)),
            other => Err(ParseError::new(
                t.pos,
                format!("expected an identifier, found {other}"),
            )),
        }
    }

    fn expect_int(&mut self) -> Result<(i64, Pos), ParseError> {
        let t = self.next();
        match t.tok {
            Tok::Int(n) => Ok((n, t.pos)),
            other => Err(ParseError::new(
                t.pos,
                format!("expected an integer, found {other}"),
            )),
        }
    }

    fn end_statement(&mut self) -> Result<(), ParseError> {
        match &self.peek().tok {
            Tok::Newline => {
                self.next();
                Ok(())
            }
            Tok::RBrace | Tok::Eof => Ok(()),
            other => {
                let t = self.peek();
                Err(ParseError::new(
                    t.pos,
                    format!("expected end of statement, found {other}"),
                ))
            }
        }
    }

    fn model(&mut self) -> Result<ModelFile, ParseError> {
        let mut bundle: Option<BundleBlock> = None;
        let mut hamiltonian: Option<(Syn, Pos)> = None;
        let mut lagrangian: Option<(Syn, Pos)> = None;
        let mut sections: Vec<(String, Pos, SectionStmts)> = Vec::new();
        let mut connections: Vec<(String, Pos, Fibration, ComponentStmts)> = Vec::new();
        let mut tasks: Vec<SpannedTask> = Vec::new();

        loop {
            self.skip_newlines();
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => break,
                Tok::Ident(word) => match word.as_str() {
                    "bundle" => {
                        if bundle.is_some() {
                            return Err(ParseError::new(t.pos, "duplicate bundle block"));
                        }
                        self.next();
                        bundle = Some(self.bundle_block(t.pos)?);
                    }
                    "hamiltonian" => {
                        self.next();
                        hamiltonian = Some(self.single_expr_block("H")?);
                    }
                    "lagrangian" => {
                        self.next();
                        lagrangian = Some(self.single_expr_block("L")?);
                    }
                    "section" => {
                        self.next();
                        let (name, pos) = self.expect_ident()?;
                        let assigns = self.assignment_block()?;
                        sections.push((name, pos, assigns));
                    }
                    "connection" => {
                        self.next();
                        let (name, pos) = self.expect_ident()?;
                        let (kw, kw_pos) = self.expect_ident()?;
                        if kw != "on" {
                            return Err(ParseError::new(
                                kw_pos,
                                format!("expected `on`, found `{kw}`"),
                            ));
                        }
                        let fibration = self.fibration()?;
                        let comps = self.component_block()?;
                        connections.push((name, pos, fibration, comps));
                    }
                    "tasks" => {
                        self.next();
                        tasks.extend(self.tasks_block()?);
                    }
                    other => {
                        return Err(ParseError::new(
                            t.pos,
                            format!("unknown block `{other}`"),
                        )
                        .with_hint(
                            "expected bundle, hamiltonian, lagrangian, section, connection, or tasks",
                        ));
                    }
                },
                other => {
                    return Err(ParseError::new(
                        t.pos,
                        format!("expected a block keyword, found {other}"),
                    ));
                }
            }
        }

        let bundle = bundle.ok_or_else(|| {
            ParseError::new(Pos { line: 1, col: 1 }, "model has no bundle block")
                .with_hint("start with `bundle { n = 1 \\n m = 1 }`")
        })?;
        elaborate(
            bundle,
            hamiltonian,
            lagrangian,
            sections,
            connections,
            tasks,
        )
    }

    fn bundle_block(&mut self, pos: Pos) -> Result<BundleBlock, ParseError> {
        let mut block = BundleBlock {
            pos: Some(pos),
            ..BundleBlock::default()
        };
        self.expect(Tok::LBrace)?;
        loop {
            self.skip_newlines();
            if matches!(self.peek().tok, Tok::RBrace) {
                self.next();
                break;
            }
            let (key, key_pos) = self.expect_ident()?;
            match key.as_str() {
                "n" | "m" => {
                    self.expect(Tok::Eq)?;
                    let (value, vpos) = self.expect_int()?;
                    if value < 1 {
                        return Err(ParseError::new(vpos, "dimension must be positive"));
                    }
                    if key == "n" {
                        block.n = Some((value as usize, vpos));
                    } else {
                        block.m = Some((value as usize, vpos));
                    }
                }
                "base" | "fiber" => {
                    self.expect(Tok::Eq)?;
                    let names = self.ident_list()?;
                    if key == "base" {
                        block.base = Some(names);
                    } else {
                        block.fiber = Some(names);
                    }
                }
                "theta" => {
                    self.expect(Tok::Eq)?;
                    let (name, _) = self.expect_ident()?;
                    block.theta = Some(name);
                }
                "parameter" => {
                    let (name, _) = self.expect_ident()?;
                    block.parameters.push(name);
                }
                "parameters" => {
                    self.expect(Tok::Eq)?;
                    block.parameters.extend(self.ident_list()?);
                }
                other => {
                    return Err(
                        ParseError::new(key_pos, format!("unknown bundle key `{other}`"))
                            .with_hint(
                                "expected n, m, base, fiber, theta, parameter, or parameters",
                            ),
                    );
                }
            }
            self.end_statement()?;
        }
        Ok(block)
    }

    fn ident_list(&mut self) -> Result<Vec<String>, ParseError> {
        let mut names = vec![self.expect_ident()?.0];
        while matches!(self.peek().tok, Tok::Comma) {
            self.next();
            names.push(self.expect_ident()?.0);
        }
        Ok(names)
    }

    fn single_expr_block(&mut self, key: &str) -> Result<(Syn, Pos), ParseError> {
        self.expect(Tok::LBrace)?;
        self.skip_newlines();
        let (name, pos) = self.expect_ident()?;
        if name != key {
            return Err(ParseError::new(
                pos,
                format!("expected `{key} = <expression>`, found `{name}`"),
            ));
        }
        self.expect(Tok::Eq)?;
        let syn = self.expression()?;
        self.end_statement()?;
        self.skip_newlines();
        self.expect(Tok::RBrace)?;
        Ok((syn, pos))
    }

    fn assignment_block(&mut self) -> Result<SectionStmts, ParseError> {
        let mut out = Vec::new();
        self.expect(Tok::LBrace)?;
        loop {
            self.skip_newlines();
            if matches!(self.peek().tok, Tok::RBrace) {
                self.next();
                break;
            }
            let (name, pos) = self.coordinate_name()?;
            self.expect(Tok::Eq)?;
            let syn = self.expression()?;
            out.push((name, pos, syn));
            self.end_statement()?;
        }
        Ok(out)
    }

    fn component_block(&mut self) -> Result<ComponentStmts, ParseError> {
        let mut out = Vec::new();
        self.expect(Tok::LBrace)?;
        loop {
            self.skip_newlines();
            if matches!(self.peek().tok, Tok::RBrace) {
                self.next();
                break;
            }
            let (fiber, fpos) = self.coordinate_name()?;
            self.expect(Tok::Comma)?;
            let (base, bpos) = self.coordinate_name()?;
            self.expect(Tok::Eq)?;
            let syn = self.expression()?;
            out.push((fiber, fpos, base, bpos, syn));
            self.end_statement()?;
        }
        Ok(out)
    }

    fn fibration(&mut self) -> Result<Fibration, ParseError> {
        let (left, pos) = self.expect_ident()?;
        self.expect(Tok::Arrow)?;
        let (right, _) = self.expect_ident()?;
        match (left.as_str(), right.as_str()) {
            ("Y", "X") => Ok(Fibration::YOverX),
            ("Y", "Theta") => Ok(Fibration::YOverTheta),
            ("Theta", "X") => Ok(Fibration::ThetaOverX),
            ("Pi", "X") => Ok(Fibration::PiOverX),
            ("Pi", "Y") => Ok(Fibration::PiOverY),
            _ => Err(
                ParseError::new(pos, format!("unknown fibration `{left}->{right}`"))
                    .with_hint("expected Y->X, Y->Theta, Theta->X, Pi->X, or Pi->Y"),
            ),
        }
    }

    fn tasks_block(&mut self) -> Result<Vec<SpannedTask>, ParseError> {
        let mut out = Vec::new();
        self.expect(Tok::LBrace)?;
        loop {
            self.skip_newlines();
            if matches!(self.peek().tok, Tok::RBrace) {
                self.next();
                break;
            }
            let (name, pos) = self.task_name()?;
            let task = match name.as_str() {
                "prolong" => {
                    let (r, rpos) = self.expect_int()?;
                    if r < 0 {
                        return Err(ParseError::new(rpos, "jet order must be non-negative"));
                    }
                    Task::Prolong(r as usize)
                }
                "hamilton" => Task::Hamilton,
                "euler-lagrange" => Task::EulerLagrange,
                "check-closed" => Task::CheckClosed,
                "restrict" => {
                    let (h, _) = self.expect_ident()?;
                    let sigma = if matches!(self.peek().tok, Tok::Ident(_)) {
                        Some(self.expect_ident()?.0)
                    } else {
                        None
                    };
                    Task::Restrict { h, sigma }
                }
                "legendre" => Task::Legendre,
                "contact-forms" => Task::ContactForms,
                "composite-connection" => {
                    let (h_theta, _) = self.expect_ident()?;
                    let (gamma, _) = self.expect_ident()?;
                    Task::CompositeConnection { h_theta, gamma }
                }
                "pullback-connection" => {
                    let (h_theta, _) = self.expect_ident()?;
                    let (h, _) = self.expect_ident()?;
                    Task::PullbackConnection { h_theta, h }
                }
                "vertical-differential" => {
                    let (h_theta, _) = self.expect_ident()?;
                    Task::VerticalDifferential { h_theta }
                }
                other => {
                    return Err(
                        ParseError::new(pos, format!("unknown task `{other}`")).with_hint(
                            "expected prolong, hamilton, euler-lagrange, check-closed, restrict, \
                             legendre, contact-forms, composite-connection, pullback-connection, \
                             or vertical-differential",
                        ),
                    );
                }
            };
            out.push(SpannedTask { task, pos });
            self.end_statement()?;
        }
        Ok(out)
    }

    /// A task name: identifiers joined by hyphens.
    fn task_name(&mut self) -> Result<(String, Pos), ParseError> {
        let (mut name, pos) = self.expect_ident()?;
        while matches!(self.peek().tok, Tok::Minus) {
            self.next();
            let (part, _) = self.expect_ident()?;
            name.push('-');
            name.push_str(&part);
        }
        Ok((name, pos))
    }

    /// A coordinate reference: IDENT with an optional bracketed index pair
    /// (`p[1,2]`), reconstructed into the display name.
    fn coordinate_name(&mut self) -> Result<(String, Pos), ParseError> {
        let (mut name, pos) = self.expect_ident()?;
        if matches!(self.peek().tok, Tok::LBracket) {
            self.next();
            let (first, _) = self.expect_int()?;
            name.push('[');
            name.push_str(&first.to_string());
            if matches!(self.peek().tok, Tok::Comma) {
                self.next();
                let (second, _) = self.expect_int()?;
                name.push(',');
                name.push_str(&second.to_string());
            }
            self.expect(Tok::RBracket)?;
            name.push(']');
            // a trailing jet subscript may follow the bracket: p[1,2]_1
            if let Tok::Ident(suffix) = &self.peek().tok {
                if let Some(rest) = suffix.strip_prefix('_') {
                    let rest = rest.to_string();
                    self.next();
                    name.push('_');
                    name.push_str(&rest);
                }
            }
        }
        Ok((name, pos))
    }

    fn expression(&mut self) -> Result<Syn, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    acc = Syn::Add(Box::new(acc), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.next();
                    acc = Syn::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Syn, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    acc = Syn::Mul(Box::new(acc), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    let pos = self.next().pos;
                    acc = Syn::Div(Box::new(acc), Box::new(self.unary()?), pos);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Syn, ParseError> {
        if matches!(self.peek().tok, Tok::Minus) {
            self.next();
            return Ok(Syn::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Syn, ParseError> {
        let base = self.primary()?;
        if matches!(self.peek().tok, Tok::Caret) {
            self.next();
            let (exp, pos) = self.expect_int()?;
            if exp < 0 {
                return Err(ParseError::new(pos, "negative powers are not polynomial")
                    .with_hint("divide by a constant instead"));
            }
            return Ok(Syn::Pow(Box::new(base), exp as u32));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Syn, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(n) => {
                self.next();
                Ok(Syn::Int(*n))
            }
            Tok::Ident(_) => {
                let (name, pos) = self.coordinate_name()?;
                Ok(Syn::Name(name, pos))
            }
            Tok::LParen => {
                self.next();
                let inner = self.expression()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => Err(ParseError::new(
                t.pos,
                format!("expected an expression, found {other}"),
            )),
        }
    }
}

/// Fold a syntax tree into a canonical expression against the chart.
fn fold_expr(syn: &Syn, chart: &Chart) -> Result<Expr, ParseError> {
    match syn {
        Syn::Int(n) => Ok(Expr::int(*n)),
        Syn::Name(name, pos) => chart.resolve(name).map(|c| Expr::coord(&c)).ok_or_else(|| {
            ParseError::new(*pos, format!("unknown coordinate `{name}`")).with_hint(
                "declare it in the bundle block (base/fiber/theta names) or as a parameter",
            )
        }),
        Syn::Add(a, b) => Ok(fold_expr(a, chart)? + fold_expr(b, chart)?),
        Syn::Sub(a, b) => Ok(fold_expr(a, chart)? - fold_expr(b, chart)?),
        Syn::Mul(a, b) => Ok(fold_expr(a, chart)? * fold_expr(b, chart)?),
        Syn::Div(a, b, pos) => fold_expr(a, chart)?
            .checked_div(&fold_expr(b, chart)?)
            .map_err(|e| {
                ParseError::new(*pos, e.to_string())
                    .with_hint("only division by a nonzero rational constant is defined")
            }),
        Syn::Neg(a) => Ok(-fold_expr(a, chart)?),
        Syn::Pow(a, e) => Ok(fold_expr(a, chart)?.pow(*e)),
    }
}

fn elaborate(
    bundle: BundleBlock,
    hamiltonian: Option<(Syn, Pos)>,
    lagrangian: Option<(Syn, Pos)>,
    sections: Vec<(String, Pos, SectionStmts)>,
    connections: Vec<(String, Pos, Fibration, ComponentStmts)>,
    tasks: Vec<SpannedTask>,
) -> Result<ModelFile, ParseError> {
    let bundle_pos = bundle.pos.unwrap_or(Pos { line: 1, col: 1 });
    let (n, _) = bundle
        .n
        .ok_or_else(|| ParseError::new(bundle_pos, "bundle block is missing `n`"))?;
    let (m, _) = bundle
        .m
        .ok_or_else(|| ParseError::new(bundle_pos, "bundle block is missing `m`"))?;

    let mut builder = Chart::builder(n, m).jet_order(2).with_momenta();
    if let Some(base) = &bundle.base {
        builder = builder.base_names(base.clone());
    }
    if let Some(fiber) = &bundle.fiber {
        builder = builder.fiber_names(fiber.clone());
    }
    if let Some(theta) = &bundle.theta {
        builder = builder.theta_name(theta.clone());
    }
    builder = builder.parameters(bundle.parameters.clone());
    let chart = builder
        .build()
        .map_err(|e| ParseError::new(bundle_pos, e.to_string()))?;
    let legendre = LegendreChart::from_chart(chart.clone())
        .map_err(|e| ParseError::new(bundle_pos, e.to_string()))?;

    let hamiltonian = match hamiltonian {
        Some((syn, pos)) => {
            let density = fold_expr(&syn, &chart)?;
            Some(
                HamiltonianSpec::new(&legendre, density)
                    .map_err(|e| ParseError::new(pos, e.to_string()))?,
            )
        }
        None => None,
    };
    let lagrangian = match lagrangian {
        Some((syn, _)) => Some(fold_expr(&syn, &chart)?),
        None => None,
    };

    let mut section_map = BTreeMap::new();
    for (name, pos, assigns) in sections {
        if assigns.is_empty() {
            return Err(ParseError::new(pos, format!("section `{name}` is empty")));
        }
        let mut resolved: BTreeMap<CoordinateId, Expr> = BTreeMap::new();
        let mut is_theta = false;
        for (coord_name, cpos, syn) in &assigns {
            let coord = chart.resolve(coord_name).ok_or_else(|| {
                ParseError::new(*cpos, format!("unknown coordinate `{coord_name}`"))
            })?;
            if &coord == chart.theta() {
                is_theta = true;
            }
            resolved.insert(coord, fold_expr(syn, &chart)?);
        }
        let fibration = if is_theta {
            Fibration::ThetaOverX
        } else {
            Fibration::YOverTheta
        };
        let spec = SectionSpec::bundle(&chart, fibration, resolved)
            .map_err(|e| ParseError::new(pos, e.to_string()))?;
        if section_map.insert(name.clone(), spec).is_some() {
            return Err(ParseError::new(pos, format!("duplicate section `{name}`")));
        }
    }

    let mut connection_map = BTreeMap::new();
    for (name, pos, fibration, comps) in connections {
        let mut resolved = BTreeMap::new();
        for (fiber, fpos, base, bpos, syn) in &comps {
            let fiber_coord = chart
                .resolve(fiber)
                .ok_or_else(|| ParseError::new(*fpos, format!("unknown coordinate `{fiber}`")))?;
            let base_coord = chart
                .resolve(base)
                .ok_or_else(|| ParseError::new(*bpos, format!("unknown coordinate `{base}`")))?;
            resolved.insert((fiber_coord, base_coord), fold_expr(syn, &chart)?);
        }
        let connection = Connection::new(&chart, fibration, resolved)
            .map_err(|e| ParseError::new(pos, e.to_string()))?;
        if connection_map.insert(name.clone(), connection).is_some() {
            return Err(ParseError::new(
                pos,
                format!("duplicate connection `{name}`"),
            ));
        }
    }

    // task arguments must reference declared blocks
    for spanned in &tasks {
        let pos = spanned.pos;
        let need_hamiltonian = matches!(
            spanned.task,
            Task::Hamilton | Task::CheckClosed | Task::Restrict { .. }
        ) || (matches!(spanned.task, Task::EulerLagrange)
            && lagrangian.is_none());
        if need_hamiltonian && hamiltonian.is_none() {
            return Err(ParseError::new(
                pos,
                format!("task `{}` needs a hamiltonian block", spanned.task.name()),
            ));
        }
        match &spanned.task {
            Task::Legendre if lagrangian.is_none() => {
                return Err(ParseError::new(
                    pos,
                    "task `legendre` needs a lagrangian block",
                ));
            }
            Task::Restrict { h, sigma } => {
                require_section(&section_map, h, pos)?;
                if let Some(sigma) = sigma {
                    require_section(&section_map, sigma, pos)?;
                }
            }
            Task::CompositeConnection { h_theta, gamma } => {
                require_connection(&connection_map, h_theta, pos)?;
                require_connection(&connection_map, gamma, pos)?;
            }
            Task::PullbackConnection { h_theta, h } => {
                require_connection(&connection_map, h_theta, pos)?;
                require_section(&section_map, h, pos)?;
            }
            Task::VerticalDifferential { h_theta } => {
                require_connection(&connection_map, h_theta, pos)?;
            }
            _ => {}
        }
    }

    Ok(ModelFile {
        chart: legendre,
        hamiltonian,
        lagrangian,
        sections: section_map,
        connections: connection_map,
        tasks,
    })
}

fn require_section(
    map: &BTreeMap<String, SectionSpec>,
    name: &str,
    pos: Pos,
) -> Result<(), ParseError> {
    if map.contains_key(name) {
        Ok(())
    } else {
        Err(ParseError::new(pos, format!("unknown section `{name}`"))
            .with_hint("declare it with `section <name> { ... }`"))
    }
}

fn require_connection(
    map: &BTreeMap<String, Connection>,
    name: &str,
    pos: Pos,
) -> Result<(), ParseError> {
    if map.contains_key(name) {
        Ok(())
    } else {
        Err(ParseError::new(pos, format!("unknown connection `{name}`"))
            .with_hint("declare it with `connection <name> on <fibration> { ... }`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_model_parses() {
        let model =
            parse_model("bundle { n = 1\n m = 1 }\nhamiltonian { H = p^2/2 }\ntasks { hamilton }")
                .unwrap();
        assert_eq!(model.tasks.len(), 1);
        assert!(model.hamiltonian.is_some());
    }

    #[test]
    fn unknown_coordinate_is_positioned() {
        let err =
            parse_model("bundle { n = 1\n m = 1 }\nhamiltonian { H = q^2 }\ntasks { hamilton }")
                .unwrap_err();
        assert!(err.message.contains("unknown coordinate `q`"));
        assert_eq!(err.pos.line, 3);
        assert!(err.hint.is_some());
    }

    #[test]
    fn division_by_coordinate_is_rejected() {
        let err =
            parse_model("bundle { n = 1\n m = 1 }\nhamiltonian { H = p/y }\ntasks { hamilton }")
                .unwrap_err();
        assert!(err.message.contains("non-constant"));
    }

    #[test]
    fn tasks_must_reference_declared_blocks() {
        let err =
            parse_model("bundle { n = 1\n m = 1 }\nhamiltonian { H = p }\ntasks { restrict h }")
                .unwrap_err();
        assert!(err.message.contains("unknown section `h`"));
    }

    #[test]
    fn connection_block_parses() {
        let model = parse_model(
            "bundle { n = 2\n m = 1 }\n\
             connection Hth on Y->Theta { y, tau = y\n y, x1 = 0 }\n\
             section h { tau = x1 }\n\
             tasks { pullback-connection Hth h }",
        )
        .unwrap();
        assert!(model.connections.contains_key("Hth"));
    }

    #[test]
    fn lexical_errors_are_positioned() {
        let err = parse_model("bundle { n = 1\n m = 1 }\nhamiltonian { H = p ? 2 }").unwrap_err();
        assert!(err.message.contains("unexpected character"));
        assert_eq!(err.pos.line, 3);
    }

    #[test]
    fn restrict_task_with_field_section() {
        let model = parse_model(
            "bundle { n = 1\n m = 1 }\nhamiltonian { H = p^2/2 }\n\
             section h { tau = x }\nsection sig { y = x * tau }\n\
             tasks { restrict h sig }",
        )
        .unwrap();
        assert_eq!(
            model.tasks[0].task,
            Task::Restrict {
                h: "h".to_string(),
                sigma: Some("sig".to_string())
            }
        );
    }

    #[test]
    fn hyphenated_task_names() {
        let model = parse_model(
            "bundle { n = 1\n m = 1 }\nhamiltonian { H = p }\ntasks { check-closed\n contact-forms }",
        )
        .unwrap();
        assert_eq!(model.tasks[0].task, Task::CheckClosed);
        assert_eq!(model.tasks[1].task, Task::ContactForms);
    }
}
