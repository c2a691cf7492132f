//! Recursive-descent parser for domain files.
//!
//! Declarations (`fluent`, `agent`, `action`) may appear anywhere in the file;
//! they are collected in a first pass so that statements can refer to names
//! declared further down.

use std::collections::HashSet;
use std::sync::Arc;

use thiserror::Error;

use super::lexer::{tokenize, Token, TokenKind};
use super::{ActionDecl, ActionKind, Domain, Statement};
use crate::formula::{AgentId, AgentSet, FluentId, Formula, Signature, MAX_AGENTS};

const KEYWORDS: &[&str] = &[
    "fluent",
    "agent",
    "action",
    "executable",
    "if",
    "causes",
    "determines",
    "announces",
    "observes",
    "aware_of",
    "initially",
    "goal",
    "and",
    "or",
    "not",
    "true",
    "false",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("expected {expected}, found end of input")]
    UnexpectedEof { expected: String },
    #[error("`{0}` is a reserved word")]
    ReservedName(String),
    #[error("`{0}` is declared more than once")]
    Duplicate(String),
    #[error("undeclared fluent `{0}`")]
    UndeclaredFluent(String),
    #[error("undeclared agent `{0}`")]
    UndeclaredAgent(String),
    #[error("undeclared action `{0}`")]
    UndeclaredAction(String),
    #[error("`causes` expects a fluent literal")]
    NotALiteral,
    #[error("`announces` expects a formula without belief operators")]
    NotAFluentFormula,
    #[error("action `{0}` mixes effect kinds (causes, determines, announces)")]
    MixedEffects(String),
    #[error("domain declares no fluents")]
    NoFluents,
    #[error("domain declares no agents")]
    NoAgents,
    #[error("at most {MAX_AGENTS} agents are supported")]
    TooManyAgents,
}

/// A parse or validation failure with its 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

/// Parses and validates a domain description.
pub fn parse_domain(src: &str) -> Result<Domain, ParseError> {
    let tokens = tokenize(src)?;
    let end = end_position(src);
    let decls = collect_declarations(&tokens, end)?;
    if decls.fluents.is_empty() {
        return Err(ParseError {
            line: end.0,
            column: end.1,
            kind: ParseErrorKind::NoFluents,
        });
    }
    if decls.agents.is_empty() {
        return Err(ParseError {
            line: end.0,
            column: end.1,
            kind: ParseErrorKind::NoAgents,
        });
    }

    let names = |v: &[(String, Token)]| v.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>();
    let signature = Arc::new(Signature::new(names(&decls.fluents), names(&decls.agents)));
    let action_names = names(&decls.actions);

    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        end,
        sig: &signature,
        actions: &action_names,
    };
    let mut statements: Vec<Vec<(Statement, Token)>> = vec![Vec::new(); action_names.len()];
    let mut initially = Vec::new();
    let mut goals = Vec::new();

    while let Some(tok) = parser.peek().cloned() {
        let word = parser.expect_ident("a declaration or statement")?;
        match word.as_str() {
            "fluent" | "agent" | "action" => parser.skip_past_semi(),
            "executable" => {
                let action = parser.action_ref()?;
                parser.keyword("if")?;
                let cond = parser.formula()?;
                parser.semi()?;
                statements[action].push((Statement::Executable(cond), tok));
            }
            "initially" => {
                initially.push(parser.formula()?);
                parser.semi()?;
            }
            "goal" => {
                goals.push(parser.formula()?);
                parser.semi()?;
            }
            _ => {
                let verb_tok = parser.peek().cloned();
                let verb = parser.expect_ident(
                    "`causes`, `determines`, `announces`, `observes` or `aware_of`",
                )?;
                let (action, stmt) = match verb.as_str() {
                    "causes" => {
                        let action = parser.resolve_action(&word, &tok)?;
                        let at = parser.here();
                        let effect = parser
                            .formula()?
                            .as_literal()
                            .ok_or_else(|| at.error(ParseErrorKind::NotALiteral))?;
                        let condition = parser.condition()?;
                        (action, Statement::Causes { effect, condition })
                    }
                    "determines" => {
                        let action = parser.resolve_action(&word, &tok)?;
                        let fluent = parser.fluent_ref()?;
                        let condition = parser.condition()?;
                        (action, Statement::Determines { fluent, condition })
                    }
                    "announces" => {
                        let action = parser.resolve_action(&word, &tok)?;
                        let at = parser.here();
                        let formula = parser.formula()?;
                        if !formula.is_fluent_formula() {
                            return Err(at.error(ParseErrorKind::NotAFluentFormula));
                        }
                        let condition = parser.condition()?;
                        (action, Statement::Announces { formula, condition })
                    }
                    "observes" | "aware_of" => {
                        let agent = parser.resolve_agent(&word, &tok)?;
                        let action = parser.action_ref()?;
                        let condition = parser.condition()?;
                        let stmt = if verb == "observes" {
                            Statement::Observes { agent, condition }
                        } else {
                            Statement::AwareOf { agent, condition }
                        };
                        (action, stmt)
                    }
                    _ => {
                        let t = verb_tok.expect("identifier was consumed");
                        return Err(t.error(ParseErrorKind::Unexpected {
                            expected:
                                "`causes`, `determines`, `announces`, `observes` or `aware_of`"
                                    .into(),
                            found: format!("`{verb}`"),
                        }));
                    }
                };
                parser.semi()?;
                statements[action].push((stmt, tok));
            }
        }
    }

    let mut actions = Vec::with_capacity(action_names.len());
    for (name, stmts) in action_names.into_iter().zip(statements) {
        let mut kind = None;
        for (stmt, tok) in &stmts {
            if let Some(k) = stmt.effect_kind() {
                match kind {
                    Some(prev) if prev != k => {
                        return Err(tok.error(ParseErrorKind::MixedEffects(name)));
                    }
                    _ => kind = Some(k),
                }
            }
        }
        actions.push(ActionDecl {
            name,
            kind: kind.unwrap_or(ActionKind::Ontic),
            statements: stmts.into_iter().map(|(s, _)| s).collect(),
        });
    }

    Ok(Domain {
        signature,
        actions,
        initially,
        goals,
    })
}

fn end_position(src: &str) -> (usize, usize) {
    let line = src.lines().count().max(1) + usize::from(src.ends_with('\n'));
    let column = if src.ends_with('\n') {
        1
    } else {
        src.lines().last().map_or(0, |l| l.chars().count()) + 1
    };
    (line, column)
}

impl Token {
    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            kind,
        }
    }
}

#[derive(Default)]
struct Declarations {
    fluents: Vec<(String, Token)>,
    agents: Vec<(String, Token)>,
    actions: Vec<(String, Token)>,
}

fn collect_declarations(tokens: &[Token], end: (usize, usize)) -> Result<Declarations, ParseError> {
    let mut decls = Declarations::default();
    let mut seen: HashSet<String> = HashSet::new();
    let mut at_start = true;
    let mut i = 0;
    while i < tokens.len() {
        let tok = &tokens[i];
        i += 1;
        if tok.kind == TokenKind::Semi {
            at_start = true;
            continue;
        }
        if !at_start {
            continue;
        }
        at_start = false;
        let target = match tok.ident() {
            Some("fluent") => &mut decls.fluents,
            Some("agent") => &mut decls.agents,
            Some("action") => &mut decls.actions,
            _ => continue,
        };
        loop {
            let Some(name_tok) = tokens.get(i) else {
                return Err(ParseError {
                    line: end.0,
                    column: end.1,
                    kind: ParseErrorKind::UnexpectedEof {
                        expected: "a name".into(),
                    },
                });
            };
            let Some(name) = name_tok.ident() else {
                return Err(name_tok.error(ParseErrorKind::Unexpected {
                    expected: "a name".into(),
                    found: name_tok.describe(),
                }));
            };
            if KEYWORDS.contains(&name) {
                return Err(name_tok.error(ParseErrorKind::ReservedName(name.into())));
            }
            if !seen.insert(name.to_string()) {
                return Err(name_tok.error(ParseErrorKind::Duplicate(name.into())));
            }
            target.push((name.to_string(), name_tok.clone()));
            i += 1;
            match tokens.get(i) {
                Some(t) if t.kind == TokenKind::Comma => i += 1,
                Some(t) if t.kind == TokenKind::Semi => break,
                Some(t) => {
                    return Err(t.error(ParseErrorKind::Unexpected {
                        expected: "`,` or `;`".into(),
                        found: t.describe(),
                    }))
                }
                None => {
                    return Err(ParseError {
                        line: end.0,
                        column: end.1,
                        kind: ParseErrorKind::UnexpectedEof {
                            expected: "`;`".into(),
                        },
                    })
                }
            }
        }
    }
    if decls.agents.len() > MAX_AGENTS {
        let tok = &decls.agents[MAX_AGENTS].1;
        return Err(tok.error(ParseErrorKind::TooManyAgents));
    }
    Ok(decls)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    end: (usize, usize),
    sig: &'a Signature,
    actions: &'a [String],
}

/// Source position used for errors raised after a sub-parse.
struct At(usize, usize);

impl At {
    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.0,
            column: self.1,
            kind,
        }
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&'a Token> {
        self.tokens.get(self.pos + offset)
    }

    fn here(&self) -> At {
        match self.peek() {
            Some(t) => At(t.line, t.column),
            None => At(self.end.0, self.end.1),
        }
    }

    fn eof(&self, expected: &str) -> ParseError {
        ParseError {
            line: self.end.0,
            column: self.end.1,
            kind: ParseErrorKind::UnexpectedEof {
                expected: expected.into(),
            },
        }
    }

    fn next_token(&mut self, expected: &str) -> Result<&'a Token, ParseError> {
        let tok = self.peek().ok_or_else(|| self.eof(expected))?;
        self.pos += 1;
        Ok(tok)
    }

    fn expect(&mut self, kind: TokenKind, expected: &str) -> Result<(), ParseError> {
        let tok = self.next_token(expected)?;
        if tok.kind == kind {
            Ok(())
        } else {
            Err(tok.error(ParseErrorKind::Unexpected {
                expected: expected.into(),
                found: tok.describe(),
            }))
        }
    }

    fn semi(&mut self) -> Result<(), ParseError> {
        self.expect(TokenKind::Semi, "`;`")
    }

    fn expect_ident(&mut self, expected: &str) -> Result<String, ParseError> {
        let tok = self.next_token(expected)?;
        tok.ident().map(str::to_string).ok_or_else(|| {
            tok.error(ParseErrorKind::Unexpected {
                expected: expected.into(),
                found: tok.describe(),
            })
        })
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let expected = format!("`{kw}`");
        let tok = self.next_token(&expected)?;
        if tok.ident() == Some(kw) {
            Ok(())
        } else {
            Err(tok.error(ParseErrorKind::Unexpected {
                expected,
                found: tok.describe(),
            }))
        }
    }

    fn skip_past_semi(&mut self) {
        while let Some(tok) = self.peek() {
            self.pos += 1;
            if tok.kind == TokenKind::Semi {
                break;
            }
        }
    }

    fn name_token(&mut self, what: &str) -> Result<(&'a Token, &'a str), ParseError> {
        let tok = self.next_token(what)?;
        match tok.ident() {
            Some(name) => Ok((tok, name)),
            None => Err(tok.error(ParseErrorKind::Unexpected {
                expected: what.into(),
                found: tok.describe(),
            })),
        }
    }

    fn resolve_action(&self, name: &str, tok: &Token) -> Result<usize, ParseError> {
        self.actions
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| tok.error(ParseErrorKind::UndeclaredAction(name.into())))
    }

    fn resolve_agent(&self, name: &str, tok: &Token) -> Result<AgentId, ParseError> {
        self.sig
            .agent(name)
            .ok_or_else(|| tok.error(ParseErrorKind::UndeclaredAgent(name.into())))
    }

    fn action_ref(&mut self) -> Result<usize, ParseError> {
        let (tok, name) = self.name_token("an action name")?;
        self.resolve_action(name, tok)
    }

    fn agent_ref(&mut self) -> Result<AgentId, ParseError> {
        let (tok, name) = self.name_token("an agent name")?;
        self.resolve_agent(name, tok)
    }

    fn fluent_ref(&mut self) -> Result<FluentId, ParseError> {
        let (tok, name) = self.name_token("a fluent name")?;
        self.sig
            .fluent(name)
            .ok_or_else(|| tok.error(ParseErrorKind::UndeclaredFluent(name.into())))
    }

    /// Optional `if φ`; absent means `true`.
    fn condition(&mut self) -> Result<Formula, ParseError> {
        if self.peek().and_then(Token::ident) == Some("if") {
            self.pos += 1;
            self.formula()
        } else {
            Ok(Formula::True)
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek().and_then(Token::ident) == Some("or") {
            self.pos += 1;
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek().and_then(Token::ident) == Some("and") {
            self.pos += 1;
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.peek().and_then(Token::ident) == Some("not") {
            self.pos += 1;
            return Ok(Formula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        const EXPECTED: &str = "a formula";
        let tok = self.peek().ok_or_else(|| self.eof(EXPECTED))?;
        match &tok.kind {
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.formula()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(inner)
            }
            TokenKind::Ident(word) => {
                let is_call = self.peek_at(1).map(|t| &t.kind) == Some(&TokenKind::LParen);
                match word.as_str() {
                    "true" => {
                        self.pos += 1;
                        Ok(Formula::True)
                    }
                    "false" => {
                        self.pos += 1;
                        Ok(Formula::False)
                    }
                    "B" if is_call => {
                        self.pos += 2;
                        let agent = self.agent_ref()?;
                        self.expect(TokenKind::Comma, "`,`")?;
                        let inner = self.formula()?;
                        self.expect(TokenKind::RParen, "`)`")?;
                        Ok(Formula::believes(agent, inner))
                    }
                    "E" | "C" if is_call => {
                        let common = word == "C";
                        self.pos += 2;
                        let group = self.group()?;
                        self.expect(TokenKind::Comma, "`,`")?;
                        let inner = self.formula()?;
                        self.expect(TokenKind::RParen, "`)`")?;
                        Ok(if common {
                            Formula::common(group, inner)
                        } else {
                            Formula::everyone(group, inner)
                        })
                    }
                    w if KEYWORDS.contains(&w) => Err(tok.error(ParseErrorKind::Unexpected {
                        expected: EXPECTED.into(),
                        found: tok.describe(),
                    })),
                    _ => self.fluent_ref().map(Formula::Atom),
                }
            }
            _ => Err(tok.error(ParseErrorKind::Unexpected {
                expected: EXPECTED.into(),
                found: tok.describe(),
            })),
        }
    }

    /// `[a, b, ...]`, non-empty.
    fn group(&mut self) -> Result<AgentSet, ParseError> {
        self.expect(TokenKind::LBracket, "`[`")?;
        let mut group = AgentSet::empty();
        group.insert(self.agent_ref()?);
        loop {
            let tok = self.next_token("`,` or `]`")?;
            match tok.kind {
                TokenKind::Comma => group.insert(self.agent_ref()?),
                TokenKind::RBracket => return Ok(group),
                _ => {
                    return Err(tok.error(ParseErrorKind::Unexpected {
                        expected: "`,` or `]`".into(),
                        found: tok.describe(),
                    }))
                }
            }
        }
    }
}
