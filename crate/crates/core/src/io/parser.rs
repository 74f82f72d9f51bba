use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::lexer::{tokenize, Span, Tok};
use super::model::ModelFile;
use crate::syntax::{CalcError, DefinitionTable, Name, Process, SignalId, KEYWORDS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{span}: unexpected {found}, expected {}", expected.join(" or "))]
    Syntax { span: Span, found: String, expected: Vec<String> },
    #[error("{span}: unexpected character `{found}`")]
    BadCharacter { span: Span, found: char },
    #[error("{span}: channel `{name}` is used but not declared")]
    UndeclaredChannel { span: Span, name: Name },
    #[error("{span}: agent `{agent}` is defined twice")]
    DuplicateAgent { span: Span, agent: Name },
    #[error("{span}: {source}")]
    Invalid { span: Span, source: CalcError },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Syntax { span, .. }
            | ParseError::BadCharacter { span, .. }
            | ParseError::UndeclaredChannel { span, .. }
            | ParseError::DuplicateAgent { span, .. }
            | ParseError::Invalid { span, .. } => *span,
        }
    }
}

/// Parses a whole model file.
///
/// When the file declares at least one channel, every free name used as a
/// channel must be among the declarations.
pub fn parse_model(src: &str) -> Result<ModelFile, ParseError> {
    let mut parser = Parser::new(src)?;
    parser.model()
}

/// Parses a single process term with no declaration checks.
pub fn parse_process(src: &str) -> Result<Process, ParseError> {
    let mut parser = Parser::new(src)?;
    let p = parser.proc()?;
    parser.expect(&Tok::Eof, "end of input")?;
    Ok(p)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    declared: Option<BTreeSet<Name>>,
    bound: Vec<Name>,
}

fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        let toks = tokenize(src).map_err(|e| ParseError::BadCharacter { span: e.span, found: e.found })?;
        Ok(Parser { toks, pos: 0, declared: None, bound: Vec::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            span: self.span(),
            found: self.peek().describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&[what])
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn int(&mut self) -> Result<(u64, Span), ParseError> {
        let span = self.span();
        match self.peek() {
            Tok::Int(v) => {
                let v = *v;
                self.bump();
                Ok((v, span))
            }
            _ => self.fail(&["number"]),
        }
    }

    fn signal(&mut self) -> Result<SignalId, ParseError> {
        let (v, span) = self.int()?;
        let v = u32::try_from(v).map_err(|_| ParseError::Invalid { span, source: CalcError::InvalidSignal(0) })?;
        SignalId::new(v).map_err(|source| ParseError::Invalid { span, source })
    }

    /// A single identifier segment that is not a keyword.
    fn segment(&mut self) -> Result<(String, Span), ParseError> {
        let span = self.span();
        match self.peek() {
            Tok::Ident(s) if !is_keyword(s) => {
                let s = s.clone();
                self.bump();
                Ok((s, span))
            }
            _ => self.fail(&["name"]),
        }
    }

    /// `seg {"." seg}`, joining greedily.
    fn dotted(&mut self) -> Result<(Name, Span), ParseError> {
        let (mut text, span) = self.segment()?;
        while self.peek() == &Tok::Dot && matches!(self.peek_at(1), Tok::Ident(_)) {
            self.bump();
            let (seg, _) = self.segment()?;
            text.push('.');
            text.push_str(&seg);
        }
        let name = Name::new(&text).map_err(|source| ParseError::Invalid { span, source })?;
        Ok((name, span))
    }

    fn simple(&mut self) -> Result<(Name, Span), ParseError> {
        let (text, span) = self.segment()?;
        let name = Name::new(&text).map_err(|source| ParseError::Invalid { span, source })?;
        Ok((name, span))
    }

    fn use_channel(&self, name: &Name, span: Span) -> Result<(), ParseError> {
        if let Some(declared) = &self.declared {
            if !self.bound.contains(name) && !declared.contains(name) {
                return Err(ParseError::UndeclaredChannel { span, name: name.clone() });
            }
        }
        Ok(())
    }

    fn model(&mut self) -> Result<ModelFile, ParseError> {
        let mut channels = BTreeSet::new();
        let mut signals = BTreeSet::new();
        let mut spans = BTreeMap::new();
        while self.at_keyword("chan") {
            self.bump();
            let (name, span) = self.dotted()?;
            spans.insert(format!("chan {name}"), span);
            channels.insert(name);
        }
        while self.at_keyword("sig") && matches!(self.peek_at(1), Tok::Int(_)) {
            self.bump();
            signals.insert(self.signal()?);
        }
        if !channels.is_empty() {
            self.declared = Some(channels.clone());
        }

        let mut entries = BTreeMap::new();
        let mut agent_spans = BTreeMap::new();
        while self.at_keyword("agent") {
            self.bump();
            let (agent, span) = self.dotted()?;
            self.expect(&Tok::Eq, "`=`")?;
            let body = self.proc()?;
            if entries.insert(agent.clone(), body).is_some() {
                return Err(ParseError::DuplicateAgent { span, agent });
            }
            spans.insert(format!("agent {agent}"), span);
            agent_spans.insert(agent, span);
        }
        let main_span = self.span();
        if !self.at_keyword("main") {
            return self.fail(&["`chan`", "`sig`", "`agent`", "`main`"]);
        }
        self.bump();
        self.expect(&Tok::Eq, "`=`")?;
        let main = self.proc()?;
        self.expect(&Tok::Eof, "end of input")?;
        spans.insert("main".to_string(), main_span);

        let locate = |err: &CalcError| match err {
            CalcError::UnguardedRecursion(a) | CalcError::UnresolvedAgent(a) => {
                agent_spans.get(a).copied().unwrap_or(main_span)
            }
            _ => main_span,
        };
        // report unresolved calls at the declaration that makes them
        for (agent, body) in &entries {
            for callee in body.calls() {
                if !entries.contains_key(&callee) {
                    return Err(ParseError::Invalid {
                        span: agent_spans[agent],
                        source: CalcError::UnresolvedAgent(callee),
                    });
                }
            }
        }
        let defs = DefinitionTable::new(entries)
            .map_err(|source| ParseError::Invalid { span: locate(&source), source })?;
        defs.check_resolved(&main).map_err(|source| ParseError::Invalid { span: main_span, source })?;

        Ok(ModelFile { channels, signals, defs, main, spans, ..ModelFile::default() })
    }

    pub(crate) fn proc(&mut self) -> Result<Process, ParseError> {
        let mut left = self.par()?;
        while self.peek() == &Tok::Plus {
            self.bump();
            let right = self.par()?;
            left = Process::sum(left, right);
        }
        Ok(left)
    }

    fn par(&mut self) -> Result<Process, ParseError> {
        let mut left = self.seq()?;
        while self.peek() == &Tok::Bar {
            self.bump();
            let right = self.seq()?;
            left = Process::par(left, right);
        }
        Ok(left)
    }

    fn seq(&mut self) -> Result<Process, ParseError> {
        let mut left = self.prefix()?;
        while self.peek() == &Tok::Semi {
            self.bump();
            let right = self.prefix()?;
            left = Process::seq(left, right);
        }
        Ok(left)
    }

    fn continuation(&mut self) -> Result<Process, ParseError> {
        self.expect(&Tok::Dot, "`.`")?;
        self.prefix()
    }

    fn prefix(&mut self) -> Result<Process, ParseError> {
        match self.peek().clone() {
            Tok::Int(0) => {
                self.bump();
                Ok(Process::Nil)
            }
            Tok::LParen => {
                self.bump();
                let p = self.proc()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(p)
            }
            Tok::LBracket => self.bracket(),
            Tok::Ident(word) if word == "tau" => {
                self.bump();
                Ok(Process::tau(self.continuation()?))
            }
            Tok::Ident(word) if word == "sig" => {
                self.bump();
                self.expect(&Tok::LParen, "`(`")?;
                let sig = self.signal()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Process::emit(sig, self.continuation()?))
            }
            Tok::Ident(word) if word == "new" => {
                self.bump();
                let (name, _) = self.simple()?;
                self.expect(&Tok::Dot, "`.`")?;
                self.bound.push(name.clone());
                let body = self.prefix();
                self.bound.pop();
                Ok(Process::restrict(name, body?))
            }
            Tok::Ident(word) if !is_keyword(&word) => {
                let (name, span) = self.dotted()?;
                match self.peek() {
                    Tok::Bang => {
                        self.use_channel(&name, span)?;
                        self.bump();
                        self.expect(&Tok::Lt, "`<`")?;
                        let (payload, _) = self.dotted()?;
                        self.expect(&Tok::Gt, "`>`")?;
                        Ok(Process::output(name, payload, self.continuation()?))
                    }
                    Tok::Question => {
                        self.use_channel(&name, span)?;
                        self.bump();
                        self.expect(&Tok::LParen, "`(`")?;
                        let (binder, _) = self.dotted()?;
                        self.expect(&Tok::RParen, "`)`")?;
                        self.expect(&Tok::Dot, "`.`")?;
                        self.bound.push(binder.clone());
                        let then = self.prefix();
                        self.bound.pop();
                        Ok(Process::input(name, binder, then?))
                    }
                    _ => Ok(Process::call(name)),
                }
            }
            _ => self.fail(&["`0`", "`tau`", "`sig`", "`new`", "`[`", "`(`", "name"]),
        }
    }

    fn looks_like_match(&self) -> bool {
        // after `[`: seg {"." seg} "="
        let mut k = 0;
        loop {
            match self.peek_at(k) {
                Tok::Ident(s) if !is_keyword(s) || k > 0 => {}
                _ => return false,
            }
            k += 1;
            match self.peek_at(k) {
                Tok::Eq => return true,
                Tok::Dot => k += 1,
                _ => return false,
            }
        }
    }

    fn bracket(&mut self) -> Result<Process, ParseError> {
        self.expect(&Tok::LBracket, "`[`")?;
        if self.looks_like_match() {
            let (lhs, _) = self.dotted()?;
            self.expect(&Tok::Eq, "`=`")?;
            let (rhs, _) = self.dotted()?;
            self.expect(&Tok::RBracket, "`]`")?;
            return Ok(Process::matching(lhs, rhs, self.prefix()?));
        }
        let body = self.proc()?;
        self.expect(&Tok::Comma, "`,`")?;
        let fallback = self.proc()?;
        self.expect(&Tok::RBracket, "`]`")?;
        self.expect(&Tok::At, "`@`")?;
        let sig = self.signal()?;
        Ok(Process::handler(body, fallback, sig))
    }
}
