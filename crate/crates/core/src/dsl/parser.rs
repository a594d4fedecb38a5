//! Recursive-descent parser for domains and queries, with name resolution
//! against the declarations and span-carrying diagnostics.

use std::collections::BTreeMap;

use super::lexer::{tokenize, Token, TokenKind};
use super::{ParseDiagnostic, SourceSpan};
use crate::formula::{DynamicFormula, TimeOp};
use crate::query::CausalQuery;
use crate::symbol::Symbol;
use crate::term::{
    AgentAction, ObjectTerm, ReactionTerm, SituationTerm, Sort, SystemAction, Term,
    Variable,
};
use crate::theory::{
    ActionDecl, FluentDecl, GroundAtom, NDBATheory, RigidDecl, SSADecl,
};

const KEYWORDS: &[&str] = &[
    "domain", "sorts", "objects", "rigid", "fluent", "action", "reactions", "poss_ag", "poss",
    "ssa", "init", "exists", "forall", "true", "false", "time", "Poss", "After", "do", "S0",
    "causes", "causes_directly", "ccauses", "pcauses", "cafter", "pafter", "effect", "scenario",
    "in", "Reaction", "Action",
];

fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Parses one domain file into a structurally resolved theory.
pub fn parse_domain(text: &str) -> Result<NDBATheory, Vec<ParseDiagnostic>> {
    let tokens = tokenize(text).map_err(sorted)?;
    if tokens.len() == 1 {
        return Err(vec![ParseDiagnostic::error(
            "missing domain section",
            SourceSpan::new(1, 1, 1),
        )]);
    }
    let mut p = Parser::new(&tokens);
    let raw = p.domain();
    match raw {
        Some(raw) if p.diags.is_empty() => {
            let theory = lower_domain(&raw, &mut p.diags);
            if p.diags.is_empty() {
                Ok(theory)
            } else {
                Err(sorted(p.diags))
            }
        }
        _ => {
            if p.diags.is_empty() {
                p.diags.push(ParseDiagnostic::error(
                    "missing domain section",
                    SourceSpan::new(1, 1, 1),
                ));
            }
            Err(sorted(p.diags))
        }
    }
}

/// Parses a bracketed agent action sequence such as
/// `[comm(I0), move(I0,I1)]` against a resolved theory.
pub fn parse_agent_sequence(
    theory: &NDBATheory,
    text: &str,
) -> Result<Vec<AgentAction>, Vec<ParseDiagnostic>> {
    let tokens = tokenize(text).map_err(sorted)?;
    let mut p = Parser::new(&tokens);
    let seq = p.agent_sequence(theory);
    match seq {
        Some(seq) if p.diags.is_empty() => {
            if !p.at(TokenKind::Eof) {
                let t = p.peek().clone();
                return Err(vec![ParseDiagnostic::error(
                    format!("trailing input after sequence: {}", describe(&t)),
                    t.span,
                )]);
            }
            Ok(seq)
        }
        _ => {
            if p.diags.is_empty() {
                p.diags.push(ParseDiagnostic::error("empty sequence", SourceSpan::new(1, 1, 1)));
            }
            Err(sorted(p.diags))
        }
    }
}

/// Parses one query against a resolved theory.
pub fn parse_query(theory: &NDBATheory, text: &str) -> Result<CausalQuery, Vec<ParseDiagnostic>> {
    let tokens = tokenize(text).map_err(sorted)?;
    let mut p = Parser::new(&tokens);
    let q = p.query(theory);
    match q {
        Some(q) if p.diags.is_empty() => Ok(q),
        _ => {
            if p.diags.is_empty() {
                p.diags.push(ParseDiagnostic::error("empty query", SourceSpan::new(1, 1, 1)));
            }
            Err(sorted(p.diags))
        }
    }
}

fn sorted(mut diags: Vec<ParseDiagnostic>) -> Vec<ParseDiagnostic> {
    diags.sort_by_key(|d| d.span);
    diags
}

// ---------------------------------------------------------------------------
// Surface syntax (name-unresolved)

#[derive(Clone, Debug)]
enum SurfaceTerm {
    /// Bare identifier: variable or constant.
    Name(Symbol, SourceSpan),
    /// Applied identifier: an action term.
    Call(Symbol, Vec<SurfaceTerm>, SourceSpan),
}

impl SurfaceTerm {
    fn span(&self) -> SourceSpan {
        match self {
            SurfaceTerm::Name(_, s) | SurfaceTerm::Call(_, _, s) => *s,
        }
    }
}

#[derive(Clone, Debug)]
enum SurfaceFormula {
    True,
    False,
    Atom(Symbol, Vec<SurfaceTerm>, SourceSpan),
    Poss(SurfaceTerm, SourceSpan),
    After(SurfaceTerm, Box<SurfaceFormula>, SourceSpan),
    Not(Box<SurfaceFormula>),
    And(Vec<SurfaceFormula>),
    Or(Vec<SurfaceFormula>),
    Exists(Vec<(Symbol, Symbol, SourceSpan)>, Box<SurfaceFormula>),
    Forall(Vec<(Symbol, Symbol, SourceSpan)>, Box<SurfaceFormula>),
    Eq(SurfaceTerm, SurfaceTerm),
    TimeCmp(TimeOp, i64),
}

#[derive(Debug)]
struct RawAction {
    name: Symbol,
    params: Vec<(Symbol, Symbol, SourceSpan)>,
    reactions: Vec<Symbol>,
    poss_ag: SurfaceFormula,
    poss_sys: SurfaceFormula,
}

#[derive(Debug)]
struct RawSsa {
    fluent: Symbol,
    fluent_span: SourceSpan,
    params: Vec<(Symbol, Symbol, SourceSpan)>,
    body: SurfaceFormula,
}

#[derive(Debug)]
struct RawDomain {
    name: Symbol,
    sorts: Vec<Symbol>,
    objects: Vec<(Symbol, Symbol)>,
    rigids: Vec<RigidDecl>,
    fluents: Vec<FluentDecl>,
    actions: Vec<RawAction>,
    ssas: Vec<RawSsa>,
    init: Vec<(Symbol, Vec<Symbol>, SourceSpan)>,
}

// ---------------------------------------------------------------------------
// Token-level parser

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    diags: Vec<ParseDiagnostic>,
}

impl<'a> Parser<'a> {
    fn new(tokens: &'a [Token]) -> Self {
        Parser { tokens, pos: 0, diags: Vec::new() }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn advance(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn at(&self, kind: TokenKind) -> bool {
        self.peek().kind == kind
    }

    fn at_kw(&self, kw: &str) -> bool {
        self.peek().kind == TokenKind::Ident && self.peek().text == kw
    }

    fn eat(&mut self, kind: TokenKind) -> bool {
        if self.at(kind) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Option<Token> {
        if self.at(kind) {
            Some(self.advance())
        } else {
            let t = self.peek().clone();
            self.diags.push(ParseDiagnostic::expecting(
                format!("unexpected {}", describe(&t)),
                t.span,
                vec![kind.show()],
            ));
            None
        }
    }

    fn expect_kw(&mut self, kw: &'static str) -> Option<Token> {
        if self.at_kw(kw) {
            Some(self.advance())
        } else {
            let t = self.peek().clone();
            self.diags.push(ParseDiagnostic::expecting(
                format!("unexpected {}", describe(&t)),
                t.span,
                vec![kw],
            ));
            None
        }
    }

    /// A non-keyword identifier.
    fn name(&mut self) -> Option<(Symbol, SourceSpan)> {
        let t = self.peek().clone();
        if t.kind == TokenKind::Ident && !is_keyword(&t.text) {
            self.advance();
            Some((Symbol::from(t.text), t.span))
        } else {
            self.diags.push(ParseDiagnostic::expecting(
                format!("unexpected {}", describe(&t)),
                t.span,
                vec!["identifier"],
            ));
            None
        }
    }

    fn integer(&mut self) -> Option<i64> {
        let t = self.expect(TokenKind::Integer)?;
        match t.text.parse::<i64>() {
            Ok(v) => Some(v),
            Err(_) => {
                self.diags.push(ParseDiagnostic::error("integer out of range", t.span));
                None
            }
        }
    }

    /// Skips to the next top-level section keyword or closing brace.
    fn sync_to_section(&mut self) {
        loop {
            let t = self.peek();
            if t.kind == TokenKind::Eof || t.kind == TokenKind::RBrace {
                return;
            }
            if t.kind == TokenKind::Ident
                && matches!(
                    t.text.as_str(),
                    "sorts" | "objects" | "rigid" | "fluent" | "action" | "ssa" | "init"
                )
            {
                return;
            }
            self.advance();
        }
    }

    fn domain(&mut self) -> Option<RawDomain> {
        self.expect_kw("domain")?;
        let (name, _) = self.name()?;
        self.expect(TokenKind::LBrace)?;
        let mut raw = RawDomain {
            name,
            sorts: vec![],
            objects: vec![],
            rigids: vec![],
            fluents: vec![],
            actions: vec![],
            ssas: vec![],
            init: vec![],
        };
        while !self.at(TokenKind::RBrace) && !self.at(TokenKind::Eof) {
            let before = self.pos;
            let ok = self.section(&mut raw);
            if ok.is_none() {
                self.sync_to_section();
                if self.pos == before {
                    self.advance();
                }
            }
        }
        self.expect(TokenKind::RBrace)?;
        if !self.at(TokenKind::Eof) {
            let t = self.peek().clone();
            self.diags.push(ParseDiagnostic::error(
                format!("trailing input after domain: {}", describe(&t)),
                t.span,
            ));
        }
        Some(raw)
    }

    fn section(&mut self, raw: &mut RawDomain) -> Option<()> {
        let t = self.peek().clone();
        match t.text.as_str() {
            "sorts" => {
                self.advance();
                self.expect(TokenKind::LBrace)?;
                while !self.at(TokenKind::RBrace) {
                    let (s, _) = self.name()?;
                    raw.sorts.push(s);
                    if !self.eat(TokenKind::Comma) {
                        break;
                    }
                }
                self.expect(TokenKind::RBrace)?;
            }
            "objects" => {
                self.advance();
                self.expect(TokenKind::LBrace)?;
                loop {
                    let mut group = Vec::new();
                    loop {
                        let (c, _) = self.name()?;
                        group.push(c);
                        if !self.eat(TokenKind::Comma) {
                            break;
                        }
                    }
                    self.expect(TokenKind::Colon)?;
                    let (sort, _) = self.name()?;
                    for c in group {
                        raw.objects.push((c, sort.clone()));
                    }
                    if !self.eat(TokenKind::Semi) {
                        break;
                    }
                    if self.at(TokenKind::RBrace) {
                        break;
                    }
                }
                self.expect(TokenKind::RBrace)?;
            }
            "rigid" => {
                self.advance();
                let (name, _) = self.name()?;
                self.expect(TokenKind::Slash)?;
                let arity = self.integer()?;
                if arity < 0 {
                    self.diags.push(ParseDiagnostic::error("negative arity", t.span));
                    return None;
                }
                self.expect(TokenKind::LBrace)?;
                let mut tuples = Vec::new();
                while self.at(TokenKind::LParen) {
                    self.advance();
                    let mut tuple = Vec::new();
                    while !self.at(TokenKind::RParen) {
                        let (c, _) = self.name()?;
                        tuple.push(c);
                        if !self.eat(TokenKind::Comma) {
                            break;
                        }
                    }
                    self.expect(TokenKind::RParen)?;
                    tuples.push(tuple);
                    self.eat(TokenKind::Comma);
                }
                self.expect(TokenKind::RBrace)?;
                raw.rigids.push(RigidDecl { name, arity: arity as usize, tuples });
            }
            "fluent" => {
                self.advance();
                let (name, _) = self.name()?;
                self.expect(TokenKind::LParen)?;
                let mut sorts = Vec::new();
                while !self.at(TokenKind::RParen) {
                    let (s, _) = self.name()?;
                    sorts.push(s);
                    if !self.eat(TokenKind::Comma) {
                        break;
                    }
                }
                self.expect(TokenKind::RParen)?;
                raw.fluents.push(FluentDecl { name, param_sorts: sorts });
            }
            "action" => {
                self.advance();
                let (name, _) = self.name()?;
                let params = self.param_list()?;
                self.expect(TokenKind::LBrace)?;
                self.expect_kw("reactions")?;
                self.expect(TokenKind::LBrace)?;
                let mut reactions = Vec::new();
                while !self.at(TokenKind::RBrace) {
                    let (r, _) = self.name()?;
                    reactions.push(r);
                    if !self.eat(TokenKind::Comma) {
                        break;
                    }
                }
                self.expect(TokenKind::RBrace)?;
                self.expect_kw("poss_ag")?;
                self.expect(TokenKind::Colon)?;
                let poss_ag = self.formula()?;
                self.expect_kw("poss")?;
                self.expect(TokenKind::Colon)?;
                let poss_sys = self.formula()?;
                self.expect(TokenKind::RBrace)?;
                raw.actions.push(RawAction { name, params, reactions, poss_ag, poss_sys });
            }
            "ssa" => {
                self.advance();
                let (fluent, fluent_span) = self.name()?;
                let params = self.param_list()?;
                self.expect(TokenKind::Colon)?;
                let body = self.formula()?;
                raw.ssas.push(RawSsa { fluent, fluent_span, params, body });
            }
            "init" => {
                self.advance();
                self.expect(TokenKind::LBrace)?;
                while !self.at(TokenKind::RBrace) && !self.at(TokenKind::Eof) {
                    let (name, span) = self.name()?;
                    let mut args = Vec::new();
                    if self.eat(TokenKind::LParen) {
                        while !self.at(TokenKind::RParen) {
                            let (c, _) = self.name()?;
                            args.push(c);
                            if !self.eat(TokenKind::Comma) {
                                break;
                            }
                        }
                        self.expect(TokenKind::RParen)?;
                    }
                    raw.init.push((name, args, span));
                    self.eat(TokenKind::Comma);
                }
                self.expect(TokenKind::RBrace)?;
            }
            _ => {
                self.diags.push(ParseDiagnostic::expecting(
                    format!("unexpected {}", describe(&t)),
                    t.span,
                    vec!["sorts", "objects", "rigid", "fluent", "action", "ssa", "init"],
                ));
                return None;
            }
        }
        Some(())
    }

    fn param_list(&mut self) -> Option<Vec<(Symbol, Symbol, SourceSpan)>> {
        self.expect(TokenKind::LParen)?;
        let mut params = Vec::new();
        while !self.at(TokenKind::RParen) {
            let (p, span) = self.name()?;
            self.expect(TokenKind::Colon)?;
            let (s, _) = self.name()?;
            params.push((p, s, span));
            if !self.eat(TokenKind::Comma) {
                break;
            }
        }
        self.expect(TokenKind::RParen)?;
        Some(params)
    }

    // Formula grammar, loosest first: quantifiers, ->, |, &, ~, atoms.
    fn formula(&mut self) -> Option<SurfaceFormula> {
        if self.at_kw("exists") || self.at_kw("forall") {
            let universal = self.at_kw("forall");
            self.advance();
            let mut binders = Vec::new();
            loop {
                let (v, span) = self.name()?;
                self.expect(TokenKind::Colon)?;
                let (s, _) = self.name_or_reaction_sort()?;
                binders.push((v, s, span));
                if !self.eat(TokenKind::Comma) {
                    break;
                }
            }
            self.expect(TokenKind::Dot)?;
            let body = Box::new(self.formula()?);
            return Some(if universal {
                SurfaceFormula::Forall(binders, body)
            } else {
                SurfaceFormula::Exists(binders, body)
            });
        }
        self.implication()
    }

    fn name_or_reaction_sort(&mut self) -> Option<(Symbol, SourceSpan)> {
        let t = self.peek().clone();
        if t.kind == TokenKind::Ident && (t.text == "Reaction" || t.text == "Action") {
            self.advance();
            return Some((Symbol::from(t.text), t.span));
        }
        self.name()
    }

    fn implication(&mut self) -> Option<SurfaceFormula> {
        let lhs = self.disjunction()?;
        if self.eat(TokenKind::Arrow) {
            let rhs = self.formula()?;
            Some(SurfaceFormula::Or(vec![SurfaceFormula::Not(Box::new(lhs)), rhs]))
        } else {
            Some(lhs)
        }
    }

    fn disjunction(&mut self) -> Option<SurfaceFormula> {
        let mut parts = vec![self.conjunction()?];
        while self.eat(TokenKind::Pipe) {
            parts.push(self.conjunction()?);
        }
        Some(if parts.len() == 1 { parts.pop().unwrap() } else { SurfaceFormula::Or(parts) })
    }

    fn conjunction(&mut self) -> Option<SurfaceFormula> {
        let mut parts = vec![self.unary()?];
        while self.eat(TokenKind::Amp) {
            parts.push(self.unary()?);
        }
        Some(if parts.len() == 1 { parts.pop().unwrap() } else { SurfaceFormula::And(parts) })
    }

    fn unary(&mut self) -> Option<SurfaceFormula> {
        if self.eat(TokenKind::Tilde) {
            return Some(SurfaceFormula::Not(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Option<SurfaceFormula> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::LParen => {
                self.advance();
                let f = self.formula()?;
                self.expect(TokenKind::RParen)?;
                Some(f)
            }
            TokenKind::Ident => match t.text.as_str() {
                "true" => {
                    self.advance();
                    Some(SurfaceFormula::True)
                }
                "false" => {
                    self.advance();
                    Some(SurfaceFormula::False)
                }
                "time" => {
                    self.advance();
                    let op = if self.eat(TokenKind::Gt) {
                        TimeOp::Gt
                    } else {
                        self.expect(TokenKind::Eq)?;
                        TimeOp::Eq
                    };
                    let rhs = self.integer()?;
                    Some(SurfaceFormula::TimeCmp(op, rhs))
                }
                "Poss" => {
                    self.advance();
                    self.expect(TokenKind::LParen)?;
                    let act = self.term()?;
                    self.expect(TokenKind::RParen)?;
                    Some(SurfaceFormula::Poss(act, t.span))
                }
                "After" => {
                    self.advance();
                    self.expect(TokenKind::LParen)?;
                    let act = self.term()?;
                    self.expect(TokenKind::Comma)?;
                    let body = self.formula()?;
                    self.expect(TokenKind::RParen)?;
                    Some(SurfaceFormula::After(act, Box::new(body), t.span))
                }
                name if !is_keyword(name) => {
                    let lhs = self.term()?;
                    if self.eat(TokenKind::Eq) {
                        let rhs = self.term()?;
                        Some(SurfaceFormula::Eq(lhs, rhs))
                    } else {
                        match lhs {
                            SurfaceTerm::Name(n, span) => Some(SurfaceFormula::Atom(n, vec![], span)),
                            SurfaceTerm::Call(n, args, span) => Some(SurfaceFormula::Atom(n, args, span)),
                        }
                    }
                }
                _ => {
                    self.diags.push(ParseDiagnostic::expecting(
                        format!("unexpected {}", describe(&t)),
                        t.span,
                        vec!["formula"],
                    ));
                    None
                }
            },
            _ => {
                self.diags.push(ParseDiagnostic::expecting(
                    format!("unexpected {}", describe(&t)),
                    t.span,
                    vec!["formula"],
                ));
                None
            }
        }
    }

    fn term(&mut self) -> Option<SurfaceTerm> {
        let (name, span) = self.name()?;
        if self.at(TokenKind::LParen) {
            self.advance();
            let mut args = Vec::new();
            while !self.at(TokenKind::RParen) {
                args.push(self.term()?);
                if !self.eat(TokenKind::Comma) {
                    break;
                }
            }
            self.expect(TokenKind::RParen)?;
            Some(SurfaceTerm::Call(name, args, span))
        } else {
            Some(SurfaceTerm::Name(name, span))
        }
    }

    // -----------------------------------------------------------------------
    // Queries

    fn query(&mut self, theory: &NDBATheory) -> Option<CausalQuery> {
        let t = self.peek().clone();
        let kind = if t.kind == TokenKind::Ident {
            t.text.clone()
        } else {
            self.diags.push(ParseDiagnostic::expecting(
                format!("unexpected {}", describe(&t)),
                t.span,
                vec!["causes", "causes_directly", "ccauses", "pcauses", "cafter", "pafter"],
            ));
            return None;
        };
        let lower = Lowerer { theory };
        let q = match kind.as_str() {
            "causes" | "causes_directly" => {
                self.advance();
                let action = self.term()?;
                let action = lower.system_action(&action, &BTreeMap::new(), &mut self.diags)?;
                self.expect(TokenKind::At)?;
                let ts = self.integer()?;
                self.expect_kw("effect")?;
                let effect = self.formula()?;
                let effect = lower.formula(&effect, &BTreeMap::new(), true, &mut self.diags)?;
                self.expect_kw("in")?;
                let scenario = self.situation(theory)?;
                if kind == "causes" {
                    CausalQuery::Causes { action, ts, effect, scenario }
                } else {
                    CausalQuery::CausesDirectly { action, ts, effect, scenario }
                }
            }
            "ccauses" | "pcauses" => {
                self.advance();
                let action = self.term()?;
                let action = lower.agent_action(&action, &mut self.diags)?;
                self.expect(TokenKind::At)?;
                let ts = self.integer()?;
                self.expect_kw("effect")?;
                let effect = self.formula()?;
                let effect = lower.formula(&effect, &BTreeMap::new(), true, &mut self.diags)?;
                self.expect_kw("scenario")?;
                let scenario = self.agent_sequence(theory)?;
                if kind == "ccauses" {
                    CausalQuery::CCauses { action, ts, effect, scenario }
                } else {
                    CausalQuery::PCauses { action, ts, effect, scenario }
                }
            }
            "cafter" | "pafter" => {
                self.advance();
                let seq = self.agent_sequence(theory)?;
                self.expect_kw("effect")?;
                let effect = self.formula()?;
                let effect = lower.formula(&effect, &BTreeMap::new(), true, &mut self.diags)?;
                let sit = if self.at_kw("in") {
                    self.advance();
                    self.situation(theory)?
                } else {
                    SituationTerm::S0
                };
                if kind == "cafter" {
                    CausalQuery::CAfter { seq, effect, sit }
                } else {
                    CausalQuery::PAfter { seq, effect, sit }
                }
            }
            _ => {
                self.diags.push(ParseDiagnostic::expecting(
                    format!("unknown query kind {kind:?}"),
                    t.span,
                    vec!["causes", "causes_directly", "ccauses", "pcauses", "cafter", "pafter"],
                ));
                return None;
            }
        };
        if !self.at(TokenKind::Eof) {
            let t = self.peek().clone();
            self.diags.push(ParseDiagnostic::error(
                format!("trailing input after query: {}", describe(&t)),
                t.span,
            ));
        }
        Some(q)
    }

    fn agent_sequence(&mut self, theory: &NDBATheory) -> Option<Vec<AgentAction>> {
        self.expect(TokenKind::LBracket)?;
        let lower = Lowerer { theory };
        let mut out = Vec::new();
        while !self.at(TokenKind::RBracket) {
            let t = self.term()?;
            out.push(lower.agent_action(&t, &mut self.diags)?);
            if !self.eat(TokenKind::Comma) {
                break;
            }
        }
        self.expect(TokenKind::RBracket)?;
        Some(out)
    }

    /// `S0` or `do([a1, …, an], S0)` over ground system actions.
    fn situation(&mut self, theory: &NDBATheory) -> Option<SituationTerm> {
        if self.at_kw("S0") {
            self.advance();
            return Some(SituationTerm::S0);
        }
        self.expect_kw("do")?;
        self.expect(TokenKind::LParen)?;
        self.expect(TokenKind::LBracket)?;
        let lower = Lowerer { theory };
        let mut actions = Vec::new();
        while !self.at(TokenKind::RBracket) {
            let t = self.term()?;
            actions.push(lower.system_action(&t, &BTreeMap::new(), &mut self.diags)?);
            if !self.eat(TokenKind::Comma) {
                break;
            }
        }
        self.expect(TokenKind::RBracket)?;
        self.expect(TokenKind::Comma)?;
        self.expect_kw("S0")?;
        self.expect(TokenKind::RParen)?;
        Some(SituationTerm::chain(&actions, SituationTerm::S0))
    }
}

fn describe(t: &Token) -> String {
    match t.kind {
        TokenKind::Ident | TokenKind::Integer => format!("{:?}", t.text),
        other => format!("{:?}", other.show()),
    }
}

// ---------------------------------------------------------------------------
// Lowering: name resolution against the declarations

type VarEnv = BTreeMap<Symbol, Sort>;

struct Lowerer<'a> {
    theory: &'a NDBATheory,
}

impl<'a> Lowerer<'a> {
    fn object_term(
        &self,
        t: &SurfaceTerm,
        env: &VarEnv,
        diags: &mut Vec<ParseDiagnostic>,
    ) -> Option<ObjectTerm> {
        match t {
            SurfaceTerm::Call(n, _, span) => {
                diags.push(ParseDiagnostic::error(
                    format!("{n} is an action term; an object term is required here"),
                    *span,
                ));
                None
            }
            SurfaceTerm::Name(n, span) => match env.get(n) {
                Some(Sort::Object(_)) => Some(ObjectTerm::Var(n.clone())),
                Some(other) => {
                    diags.push(ParseDiagnostic::error(
                        format!("variable {n} has sort {other}; an object is required here"),
                        *span,
                    ));
                    None
                }
                None => {
                    if self.theory.object_sort(n).is_some() {
                        Some(ObjectTerm::Const(n.clone()))
                    } else {
                        diags.push(ParseDiagnostic::error(
                            format!("undeclared object or variable {n}"),
                            *span,
                        ));
                        None
                    }
                }
            },
        }
    }

    fn reaction_term(
        &self,
        t: &SurfaceTerm,
        env: &VarEnv,
        diags: &mut Vec<ParseDiagnostic>,
    ) -> Option<ReactionTerm> {
        match t {
            SurfaceTerm::Call(n, _, span) => {
                diags.push(ParseDiagnostic::error(
                    format!("{n} is an action term; a reaction is required here"),
                    *span,
                ));
                None
            }
            SurfaceTerm::Name(n, span) => match env.get(n) {
                Some(Sort::Reaction) => Some(ReactionTerm::Var(n.clone())),
                Some(other) => {
                    diags.push(ParseDiagnostic::error(
                        format!("variable {n} has sort {other}; a reaction is required here"),
                        *span,
                    ));
                    None
                }
                None => {
                    if self.theory.is_reaction_constant(n) {
                        Some(ReactionTerm::Const(n.clone()))
                    } else {
                        diags.push(ParseDiagnostic::error(
                            format!("undeclared reaction or variable {n}"),
                            *span,
                        ));
                        None
                    }
                }
            },
        }
    }

    /// A system action term `A(x⃗, e)`: declared arity plus the reaction.
    fn system_action(
        &self,
        t: &SurfaceTerm,
        env: &VarEnv,
        diags: &mut Vec<ParseDiagnostic>,
    ) -> Option<SystemAction> {
        match t {
            SurfaceTerm::Name(n, span) => {
                diags.push(ParseDiagnostic::error(
                    format!("expected an action term, found {n}"),
                    *span,
                ));
                None
            }
            SurfaceTerm::Call(n, args, span) => {
                let decl = match self.theory.action(n) {
                    Some(d) => d,
                    None => {
                        diags.push(ParseDiagnostic::error(format!("undeclared action {n}"), *span));
                        return None;
                    }
                };
                if args.len() != decl.params.len() + 1 {
                    diags.push(ParseDiagnostic::error(
                        format!(
                            "action {n} takes {} parameters plus a reaction; found {} arguments",
                            decl.params.len(),
                            args.len()
                        ),
                        *span,
                    ));
                    return None;
                }
                let mut obj_args = Vec::new();
                for a in &args[..args.len() - 1] {
                    obj_args.push(self.object_term(a, env, diags)?);
                }
                let reaction = self.reaction_term(&args[args.len() - 1], env, diags)?;
                Some(SystemAction { name: n.clone(), args: obj_args, reaction })
            }
        }
    }

    /// An agent action term `A(x⃗)`: declared arity, no reaction.
    fn agent_action(&self, t: &SurfaceTerm, diags: &mut Vec<ParseDiagnostic>) -> Option<AgentAction> {
        match t {
            SurfaceTerm::Name(n, span) => {
                let decl = match self.theory.action(n) {
                    Some(d) => d,
                    None => {
                        diags.push(ParseDiagnostic::error(format!("undeclared action {n}"), *span));
                        return None;
                    }
                };
                if !decl.params.is_empty() {
                    diags.push(ParseDiagnostic::error(
                        format!("action {n} takes {} parameters", decl.params.len()),
                        *span,
                    ));
                    return None;
                }
                Some(AgentAction::new(n.clone(), vec![]))
            }
            SurfaceTerm::Call(n, args, span) => {
                let decl = match self.theory.action(n) {
                    Some(d) => d,
                    None => {
                        diags.push(ParseDiagnostic::error(format!("undeclared action {n}"), *span));
                        return None;
                    }
                };
                if args.len() != decl.params.len() {
                    diags.push(ParseDiagnostic::error(
                        format!(
                            "agent action {n} takes {} parameters; found {}",
                            decl.params.len(),
                            args.len()
                        ),
                        *span,
                    ));
                    return None;
                }
                let mut obj_args = Vec::new();
                for a in args {
                    obj_args.push(self.object_term(a, &BTreeMap::new(), diags)?);
                }
                Some(AgentAction { name: n.clone(), args: obj_args })
            }
        }
    }

    /// An equality operand, resolved by binding first, declarations second.
    fn eq_operand(
        &self,
        t: &SurfaceTerm,
        env: &VarEnv,
        diags: &mut Vec<ParseDiagnostic>,
    ) -> Option<Term> {
        match t {
            SurfaceTerm::Call(..) => Some(Term::Act(Box::new(self.system_action(t, env, diags)?))),
            SurfaceTerm::Name(n, span) => match env.get(n) {
                Some(Sort::Object(_)) => Some(Term::Obj(ObjectTerm::Var(n.clone()))),
                Some(Sort::Reaction) => Some(Term::React(ReactionTerm::Var(n.clone()))),
                Some(Sort::Action) => Some(Term::ActVar(n.clone())),
                None => {
                    if self.theory.object_sort(n).is_some() {
                        Some(Term::Obj(ObjectTerm::Const(n.clone())))
                    } else if self.theory.is_reaction_constant(n) {
                        Some(Term::React(ReactionTerm::Const(n.clone())))
                    } else {
                        diags.push(ParseDiagnostic::error(
                            format!("undeclared constant or variable {n}"),
                            *span,
                        ));
                        None
                    }
                }
            },
        }
    }

    fn sort_of(&self, name: &Symbol, span: SourceSpan, diags: &mut Vec<ParseDiagnostic>) -> Option<Sort> {
        match name.as_str() {
            "Reaction" => Some(Sort::Reaction),
            "Action" => {
                diags.push(ParseDiagnostic::error("quantification over actions is not supported", span));
                None
            }
            _ => {
                if self.theory.sort_declared(name) {
                    Some(Sort::Object(name.clone()))
                } else {
                    diags.push(ParseDiagnostic::error(format!("undeclared sort {name}"), span));
                    None
                }
            }
        }
    }

    fn formula(
        &self,
        f: &SurfaceFormula,
        env: &VarEnv,
        dynamic: bool,
        diags: &mut Vec<ParseDiagnostic>,
    ) -> Option<DynamicFormula> {
        match f {
            SurfaceFormula::True => Some(DynamicFormula::True),
            SurfaceFormula::False => Some(DynamicFormula::False),
            SurfaceFormula::TimeCmp(op, rhs) => Some(DynamicFormula::TimeCmp(*op, *rhs)),
            SurfaceFormula::Atom(name, args, span) => {
                let lowered: Option<Vec<ObjectTerm>> =
                    args.iter().map(|a| self.object_term(a, env, diags)).collect();
                let lowered = lowered?;
                if let Some(decl) = self.theory.fluent(name) {
                    if decl.param_sorts.len() != lowered.len() {
                        diags.push(ParseDiagnostic::error(
                            format!(
                                "fluent {name} takes {} arguments; found {}",
                                decl.param_sorts.len(),
                                lowered.len()
                            ),
                            *span,
                        ));
                        return None;
                    }
                    Some(DynamicFormula::Fluent(name.clone(), lowered))
                } else if let Some(decl) = self.theory.rigid(name) {
                    if decl.arity != lowered.len() {
                        diags.push(ParseDiagnostic::error(
                            format!("rigid {name} takes {} arguments; found {}", decl.arity, lowered.len()),
                            *span,
                        ));
                        return None;
                    }
                    Some(DynamicFormula::Rigid(name.clone(), lowered))
                } else {
                    diags.push(ParseDiagnostic::error(
                        format!("undeclared fluent or rigid relation {name}"),
                        *span,
                    ));
                    None
                }
            }
            SurfaceFormula::Poss(act, span) => {
                if !dynamic {
                    diags.push(ParseDiagnostic::error(
                        "Poss cannot appear in a precondition or successor-state axiom",
                        *span,
                    ));
                    return None;
                }
                Some(DynamicFormula::Poss(self.system_action(act, env, diags)?))
            }
            SurfaceFormula::After(act, body, span) => {
                if !dynamic {
                    diags.push(ParseDiagnostic::error(
                        "After cannot appear in a precondition or successor-state axiom",
                        *span,
                    ));
                    return None;
                }
                let act = self.system_action(act, env, diags)?;
                let body = self.formula(body, env, dynamic, diags)?;
                Some(DynamicFormula::After(act, Box::new(body)))
            }
            SurfaceFormula::Not(p) => Some(self.formula(p, env, dynamic, diags)?.not()),
            SurfaceFormula::And(ps) => {
                let parts: Option<Vec<_>> =
                    ps.iter().map(|p| self.formula(p, env, dynamic, diags)).collect();
                Some(DynamicFormula::And(parts?))
            }
            SurfaceFormula::Or(ps) => {
                let parts: Option<Vec<_>> =
                    ps.iter().map(|p| self.formula(p, env, dynamic, diags)).collect();
                Some(DynamicFormula::Or(parts?))
            }
            SurfaceFormula::Exists(binders, p) | SurfaceFormula::Forall(binders, p) => {
                let mut inner = env.clone();
                let mut vars = Vec::new();
                for (v, sortname, span) in binders {
                    let sort = self.sort_of(sortname, *span, diags)?;
                    if inner.insert(v.clone(), sort.clone()).is_some() {
                        diags.push(ParseDiagnostic::error(
                            format!("variable {v} rebound in the same scope"),
                            *span,
                        ));
                    }
                    vars.push(Variable::new(v.clone(), sort));
                }
                let body = self.formula(p, &inner, dynamic, diags)?;
                Some(match f {
                    SurfaceFormula::Exists(..) => DynamicFormula::Exists(vars, Box::new(body)),
                    _ => DynamicFormula::Forall(vars, Box::new(body)),
                })
            }
            SurfaceFormula::Eq(l, r) => {
                let span = l.span();
                let l = self.eq_operand(l, env, diags)?;
                let r = self.eq_operand(r, env, diags)?;
                let compatible = matches!(
                    (&l, &r),
                    (Term::Obj(_), Term::Obj(_))
                        | (Term::React(_), Term::React(_))
                        | (Term::Act(_) | Term::ActVar(_), Term::Act(_) | Term::ActVar(_))
                );
                if !compatible {
                    diags.push(ParseDiagnostic::error(
                        format!("equality between terms of different sorts: {l} = {r}"),
                        span,
                    ));
                }
                Some(DynamicFormula::Eq(l, r))
            }
        }
    }
}

fn lower_domain(raw: &RawDomain, diags: &mut Vec<ParseDiagnostic>) -> NDBATheory {
    // A shell with declarations only, so formulas can resolve names
    // regardless of section order.
    let shell = NDBATheory {
        name: raw.name.clone(),
        sorts: raw.sorts.clone(),
        objects: raw.objects.clone(),
        rigids: raw.rigids.clone(),
        fluents: raw.fluents.clone(),
        actions: raw
            .actions
            .iter()
            .map(|a| ActionDecl {
                name: a.name.clone(),
                params: a.params.iter().map(|(p, s, _)| (p.clone(), s.clone())).collect(),
                reactions: a.reactions.clone(),
                reaction_var: Symbol::new("e"),
                poss_ag: DynamicFormula::True,
                poss_sys: DynamicFormula::True,
            })
            .collect(),
        ssas: vec![],
        init: vec![],
        unique_names: true,
    };
    let lower = Lowerer { theory: &shell };

    let mut actions = Vec::new();
    for a in &raw.actions {
        let mut env = VarEnv::new();
        for (p, s, span) in &a.params {
            if p.as_str() == "e" {
                diags.push(ParseDiagnostic::error(
                    "parameter may not be named e; it is the reaction variable",
                    *span,
                ));
            }
            env.insert(p.clone(), Sort::Object(s.clone()));
        }
        let poss_ag = lower.formula(&a.poss_ag, &env, false, diags);
        env.insert(Symbol::new("e"), Sort::Reaction);
        let poss_sys = lower.formula(&a.poss_sys, &env, false, diags);
        if let (Some(poss_ag), Some(poss_sys)) = (poss_ag, poss_sys) {
            actions.push(ActionDecl {
                name: a.name.clone(),
                params: a.params.iter().map(|(p, s, _)| (p.clone(), s.clone())).collect(),
                reactions: a.reactions.clone(),
                reaction_var: Symbol::new("e"),
                poss_ag,
                poss_sys,
            });
        }
    }

    let mut ssas = Vec::new();
    for ssa in &raw.ssas {
        if shell.fluent(&ssa.fluent).is_none() {
            diags.push(ParseDiagnostic::error(
                format!("successor-state axiom for undeclared fluent {}", ssa.fluent),
                ssa.fluent_span,
            ));
            continue;
        }
        let mut env = VarEnv::new();
        for (p, s, span) in &ssa.params {
            if p.as_str() == "a" {
                diags.push(ParseDiagnostic::error(
                    "parameter may not be named a; it is the action variable",
                    *span,
                ));
            }
            env.insert(p.clone(), Sort::Object(s.clone()));
        }
        env.insert(Symbol::new("a"), Sort::Action);
        if let Some(body) = lower.formula(&ssa.body, &env, false, diags) {
            ssas.push(SSADecl {
                fluent: ssa.fluent.clone(),
                params: ssa.params.iter().map(|(p, s, _)| (p.clone(), s.clone())).collect(),
                action_var: Symbol::new("a"),
                body,
            });
        }
    }

    let mut init = Vec::new();
    for (name, args, span) in &raw.init {
        if shell.fluent(name).is_none() {
            diags.push(ParseDiagnostic::error(
                format!("initial atom {name} is not a declared fluent"),
                *span,
            ));
            continue;
        }
        for c in args {
            if shell.object_sort(c).is_none() {
                diags.push(ParseDiagnostic::error(
                    format!("initial atom {name} mentions undeclared constant {c}"),
                    *span,
                ));
            }
        }
        init.push(GroundAtom { name: name.clone(), args: args.clone() });
    }

    NDBATheory {
        name: raw.name.clone(),
        sorts: raw.sorts.clone(),
        objects: raw.objects.clone(),
        rigids: raw.rigids.clone(),
        fluents: raw.fluents.clone(),
        actions,
        ssas,
        init,
        unique_names: true,
    }
}
