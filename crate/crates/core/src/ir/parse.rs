// SPDX-License-Identifier: Apache-2.0

use std::collections::HashSet;

use thiserror::Error;

use super::{
    BinOp, CmpPred, IrBlock, IrFunction, IrInst, IrModule, IrType, Operand, Param, Terminator,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
        found: String,
    },
    #[error("line {line}: unsupported instruction `{opcode}`")]
    UnsupportedInstruction { opcode: String, line: usize },
    #[error("function `@{0}` is defined more than once")]
    DuplicateFunction(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Local(String),
    Global(String),
    Word(String),
    Str(String),
    Punct(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Local(s) => format!("`%{s}`"),
            Tok::Global(s) => format!("`@{s}`"),
            Tok::Word(s) => format!("`{s}`"),
            Tok::Str(s) => format!("string \"{s}\""),
            Tok::Punct(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '-' | '$' | '.' | '_')
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let syntax = |line, col, expected: &str, found: String| ParseError::Syntax {
        line,
        col,
        expected: expected.into(),
        found,
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == ';' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let read_quoted = |i: &mut usize, col: &mut usize| -> Result<String, ParseError> {
            // opening quote at chars[*i]
            *i += 1;
            *col += 1;
            let s = *i;
            while *i < chars.len() && chars[*i] != '"' && chars[*i] != '\n' {
                *i += 1;
                *col += 1;
            }
            if *i >= chars.len() || chars[*i] != '"' {
                return Err(syntax(tl, tc, "closing `\"`", "end of line".into()));
            }
            let text: String = chars[s..*i].iter().collect();
            *i += 1;
            *col += 1;
            Ok(text)
        };
        let tok = match c {
            '%' | '@' => {
                i += 1;
                col += 1;
                let name = if i < chars.len() && chars[i] == '"' {
                    read_quoted(&mut i, &mut col)?
                } else {
                    let s = i;
                    while i < chars.len() && is_name_char(chars[i]) {
                        i += 1;
                        col += 1;
                    }
                    if s == i {
                        return Err(syntax(tl, tc, "a name after the sigil", format!("`{c}`")));
                    }
                    chars[s..i].iter().collect()
                };
                if c == '%' {
                    Tok::Local(name)
                } else {
                    Tok::Global(name)
                }
            }
            '"' => Tok::Str(read_quoted(&mut i, &mut col)?),
            '(' | ')' | '{' | '}' | '[' | ']' | ',' | '=' | '*' | ':' => {
                i += 1;
                col += 1;
                Tok::Punct(c)
            }
            '#' => {
                i += 1;
                col += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                    col += 1;
                }
                Tok::Word(chars[start..i].iter().collect())
            }
            c if is_name_char(c) => {
                while i < chars.len() && is_name_char(chars[i]) {
                    i += 1;
                    col += 1;
                }
                Tok::Word(chars[start..i].iter().collect())
            }
            other => return Err(syntax(tl, tc, "a token", format!("`{other}`"))),
        };
        out.push(Token {
            tok,
            line: tl,
            col: tc,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

const LINKAGE: &[&str] = &[
    "internal",
    "private",
    "external",
    "dso_local",
    "dso_preemptable",
    "hidden",
    "protected",
    "default",
    "linkonce_odr",
    "weak_odr",
    "fastcc",
    "ccc",
    "zeroext",
    "signext",
    "noundef",
];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn line(&self) -> usize {
        self.toks[self.pos].line
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: &str) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError::Syntax {
            line: t.line,
            col: t.col,
            expected: expected.into(),
            found: t.tok.describe(),
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Punct(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            Err(self.err(&format!("`{c}`")))
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if matches!(self.peek(), Tok::Word(x) if x == w) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<(), ParseError> {
        if self.eat_word(w) {
            Ok(())
        } else {
            Err(self.err(&format!("`{w}`")))
        }
    }

    fn expect_local(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Local(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.err("a `%` name")),
        }
    }

    /// Parses an integer type such as `i1` or `i32`.
    fn int_type(&mut self) -> Result<IrType, ParseError> {
        if let Tok::Word(w) = self.peek() {
            if let Some(width) = w.strip_prefix('i').and_then(|d| d.parse::<u32>().ok()) {
                self.bump();
                return Ok(if width == 1 {
                    IrType::I1
                } else {
                    IrType::Int(width)
                });
            }
        }
        Err(self.err("an integer type"))
    }

    /// Parses `i1`, reporting other widths as unsupported for `opcode`.
    fn bool_type(&mut self, opcode: &str, line: usize) -> Result<(), ParseError> {
        match self.int_type()? {
            IrType::I1 => Ok(()),
            IrType::Int(w) => Err(ParseError::UnsupportedInstruction {
                opcode: format!("{opcode} i{w}"),
                line,
            }),
        }
    }

    fn pointer_type(&mut self, opcode: &str, line: usize) -> Result<(), ParseError> {
        if self.eat_word("ptr") {
            return Ok(());
        }
        self.bool_type(opcode, line)?;
        self.expect_punct('*')
    }

    fn operand(&mut self) -> Result<Operand, ParseError> {
        match self.peek().clone() {
            Tok::Local(s) => {
                self.bump();
                Ok(Operand::Value(s))
            }
            Tok::Word(w) if w == "true" => {
                self.bump();
                Ok(Operand::Const(true))
            }
            Tok::Word(w) if w == "false" => {
                self.bump();
                Ok(Operand::Const(false))
            }
            _ => Err(self.err("a value (`%name`, `true` or `false`)")),
        }
    }

    fn skip_align(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Punct(',')
            && matches!(self.peek_at(1), Tok::Word(w) if w == "align")
        {
            self.bump();
            self.bump();
            match self.peek() {
                Tok::Word(w) if w.chars().all(|c| c.is_ascii_digit()) => {
                    self.bump();
                }
                _ => return Err(self.err("an alignment")),
            }
        }
        Ok(())
    }

    fn module(&mut self) -> Result<IrModule, ParseError> {
        let mut module = IrModule {
            source_name: String::new(),
            functions: Vec::new(),
        };
        let mut names = HashSet::new();
        loop {
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::Word(w) if w == "define" => {
                    let f = self.function()?;
                    if !names.insert(f.name.clone()) {
                        return Err(ParseError::DuplicateFunction(f.name));
                    }
                    module.functions.push(f);
                }
                Tok::Word(w) if w == "source_filename" => {
                    self.bump();
                    self.expect_punct('=')?;
                    match self.bump().tok {
                        Tok::Str(s) => module.source_name = s,
                        _ => {
                            self.pos -= 1;
                            return Err(self.err("a string"));
                        }
                    }
                }
                Tok::Word(w) => {
                    return Err(ParseError::UnsupportedInstruction {
                        opcode: w,
                        line: self.line(),
                    })
                }
                _ => return Err(self.err("`define`")),
            }
        }
        Ok(module)
    }

    fn function(&mut self) -> Result<IrFunction, ParseError> {
        let def_line = self.line();
        self.expect_word("define")?;
        let mut linkage = Vec::new();
        while let Tok::Word(w) = self.peek() {
            if LINKAGE.contains(&w.as_str()) {
                linkage.push(w.clone());
                self.bump();
            } else {
                break;
            }
        }
        let ret_arity = if self.eat_punct('{') {
            let mut n = 0;
            loop {
                self.bool_type("define", def_line)?;
                n += 1;
                if !self.eat_punct(',') {
                    break;
                }
            }
            self.expect_punct('}')?;
            n
        } else if self.eat_word("void") {
            return Err(ParseError::UnsupportedInstruction {
                opcode: "define void".into(),
                line: def_line,
            });
        } else {
            self.bool_type("define", def_line)?;
            1
        };
        let name = match self.peek().clone() {
            Tok::Global(s) => {
                self.bump();
                s
            }
            _ => return Err(self.err("a function name `@name`")),
        };
        self.expect_punct('(')?;
        let mut params = Vec::new();
        if !self.eat_punct(')') {
            loop {
                let ty = self.int_type()?;
                while let Tok::Word(w) = self.peek() {
                    if matches!(w.as_str(), "zeroext" | "signext" | "noundef") {
                        self.bump();
                    } else {
                        break;
                    }
                }
                let pname = self.expect_local()?;
                params.push(Param { name: pname, ty });
                if self.eat_punct(')') {
                    break;
                }
                self.expect_punct(',')?;
            }
        }
        // function attributes such as `#0` or `nounwind`
        while let Tok::Word(_) = self.peek() {
            self.bump();
        }
        self.expect_punct('{')?;
        let mut blocks = Vec::new();
        while !self.eat_punct('}') {
            blocks.push(self.block(blocks.is_empty())?);
        }
        if blocks.is_empty() {
            return Err(self.err("at least one basic block"));
        }
        Ok(IrFunction {
            name,
            linkage,
            params,
            ret_arity,
            blocks,
        })
    }

    fn block(&mut self, first: bool) -> Result<IrBlock, ParseError> {
        let label = match (self.peek().clone(), self.peek_at(1).clone()) {
            (Tok::Word(w), Tok::Punct(':')) | (Tok::Str(w), Tok::Punct(':')) => {
                self.bump();
                self.bump();
                w
            }
            _ if first => "entry".to_string(),
            _ => return Err(self.err("a block label")),
        };
        let mut instructions = Vec::new();
        loop {
            let line = self.line();
            match self.peek().clone() {
                Tok::Local(result) => {
                    self.bump();
                    self.expect_punct('=')?;
                    instructions.push(self.value_inst(result, line)?);
                }
                Tok::Word(w) if w == "store" => {
                    self.bump();
                    self.bool_type("store", line)?;
                    let value = self.operand()?;
                    self.expect_punct(',')?;
                    self.pointer_type("store", line)?;
                    let slot = self.expect_local()?;
                    self.skip_align()?;
                    instructions.push(IrInst::Store { value, slot });
                }
                Tok::Word(w) if w == "br" => {
                    self.bump();
                    let terminator = if self.eat_word("label") {
                        Terminator::Jump(self.expect_local()?)
                    } else {
                        self.bool_type("br", line)?;
                        let cond = self.operand()?;
                        self.expect_punct(',')?;
                        self.expect_word("label")?;
                        let then_label = self.expect_local()?;
                        self.expect_punct(',')?;
                        self.expect_word("label")?;
                        let else_label = self.expect_local()?;
                        Terminator::Branch {
                            cond,
                            then_label,
                            else_label,
                        }
                    };
                    return Ok(IrBlock {
                        label,
                        instructions,
                        terminator,
                    });
                }
                Tok::Word(w) if w == "ret" => {
                    self.bump();
                    let values = if self.eat_punct('{') {
                        let mut n = 0;
                        loop {
                            self.bool_type("ret", line)?;
                            n += 1;
                            if !self.eat_punct(',') {
                                break;
                            }
                        }
                        self.expect_punct('}')?;
                        self.expect_punct('{')?;
                        let mut vals = Vec::with_capacity(n);
                        loop {
                            self.bool_type("ret", line)?;
                            vals.push(self.operand()?);
                            if !self.eat_punct(',') {
                                break;
                            }
                        }
                        self.expect_punct('}')?;
                        if vals.len() != n {
                            return Err(self.err(&format!("{n} returned values")));
                        }
                        vals
                    } else if self.eat_word("void") {
                        return Err(ParseError::UnsupportedInstruction {
                            opcode: "ret void".into(),
                            line,
                        });
                    } else {
                        self.bool_type("ret", line)?;
                        vec![self.operand()?]
                    };
                    return Ok(IrBlock {
                        label,
                        instructions,
                        terminator: Terminator::Return(values),
                    });
                }
                Tok::Word(w) => {
                    return Err(ParseError::UnsupportedInstruction { opcode: w, line });
                }
                _ => return Err(self.err("an instruction or terminator")),
            }
        }
    }

    fn value_inst(&mut self, result: String, line: usize) -> Result<IrInst, ParseError> {
        let opcode = match self.peek().clone() {
            Tok::Word(w) => w,
            _ => return Err(self.err("an opcode")),
        };
        self.bump();
        let inst = match opcode.as_str() {
            "and" | "or" | "xor" => {
                self.bool_type(&opcode, line)?;
                let lhs = self.operand()?;
                self.expect_punct(',')?;
                let rhs = self.operand()?;
                let op = match opcode.as_str() {
                    "and" => BinOp::And,
                    "or" => BinOp::Or,
                    _ => BinOp::Xor,
                };
                IrInst::Binary {
                    result,
                    op,
                    lhs,
                    rhs,
                }
            }
            "icmp" => {
                let pred = match self.peek().clone() {
                    Tok::Word(p) if p == "eq" => CmpPred::Eq,
                    Tok::Word(p) if p == "ne" => CmpPred::Ne,
                    Tok::Word(p) => {
                        return Err(ParseError::UnsupportedInstruction {
                            opcode: format!("icmp {p}"),
                            line,
                        })
                    }
                    _ => return Err(self.err("a comparison predicate")),
                };
                self.bump();
                self.bool_type("icmp", line)?;
                let lhs = self.operand()?;
                self.expect_punct(',')?;
                let rhs = self.operand()?;
                IrInst::Icmp {
                    result,
                    pred,
                    lhs,
                    rhs,
                }
            }
            "select" => {
                self.bool_type("select", line)?;
                let cond = self.operand()?;
                self.expect_punct(',')?;
                self.bool_type("select", line)?;
                let then_value = self.operand()?;
                self.expect_punct(',')?;
                self.bool_type("select", line)?;
                let else_value = self.operand()?;
                IrInst::Select {
                    result,
                    cond,
                    then_value,
                    else_value,
                }
            }
            "alloca" => {
                self.bool_type("alloca", line)?;
                self.skip_align()?;
                IrInst::Alloca { result }
            }
            "load" => {
                self.bool_type("load", line)?;
                self.expect_punct(',')?;
                self.pointer_type("load", line)?;
                let slot = self.expect_local()?;
                self.skip_align()?;
                IrInst::Load { result, slot }
            }
            "phi" => {
                self.bool_type("phi", line)?;
                let mut incoming = Vec::new();
                loop {
                    self.expect_punct('[')?;
                    let v = self.operand()?;
                    self.expect_punct(',')?;
                    let l = self.expect_local()?;
                    self.expect_punct(']')?;
                    incoming.push((v, l));
                    if !self.eat_punct(',') {
                        break;
                    }
                }
                IrInst::Phi { result, incoming }
            }
            _ => return Err(ParseError::UnsupportedInstruction { opcode, line }),
        };
        Ok(inst)
    }
}

/// Parses a module written in the supported IR subset.
pub fn parse_module(text: &str) -> Result<IrModule, ParseError> {
    let toks = lex(text)?;
    Parser { toks, pos: 0 }.module()
}
