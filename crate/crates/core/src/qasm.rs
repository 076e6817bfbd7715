//! OpenQASM 2.0 reader and writer for the gate subset the router handles.
//!
//! Supported statements: the `OPENQASM 2.0;` header, `include` lines (ignored),
//! `qreg`/`creg` declarations, the standard single-qubit gates, `cx`/`CX`,
//! `swap`, `U`, `measure` and `barrier`. Register-wide operands broadcast as in
//! the language definition. Angle expressions may use numbers, `pi`,
//! parentheses and `+ - * /`.
//!
//! `gate`, `opaque`, `if` and `reset` are rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind, MappedCircuit, Register};
use crate::mapping::{Mapping, MappingError};

#[derive(Debug, Error, PartialEq)]
pub enum QasmError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: unsupported construct `{construct}`")]
    Unsupported {
        line: usize,
        col: usize,
        construct: String,
    },
    #[error("{line}:{col}: `{gate}` expects {expected} {what}, found {found}")]
    Arity {
        line: usize,
        col: usize,
        gate: String,
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{line}:{col}: undeclared register `{name}`")]
    UndeclaredRegister {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("{line}:{col}: index {index} out of range for register `{name}` of size {size}")]
    IndexOutOfRange {
        line: usize,
        col: usize,
        name: String,
        index: usize,
        size: usize,
    },
    #[error("{line}:{col}: repeated operand in `{gate}`")]
    RepeatedOperand {
        line: usize,
        col: usize,
        gate: String,
    },
    #[error("{line}:{col}: register `{name}` declared twice")]
    Redeclared {
        line: usize,
        col: usize,
        name: String,
    },
    #[error("{line}:{col}: register broadcast over different sizes")]
    BroadcastMismatch { line: usize, col: usize },
    #[error("mapping header: {0}")]
    Mapping(#[from] MappingError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Real(f64),
    Int(u64),
    Str(String),
    Sym(char),
    Arrow,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, QasmError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let bump = |i: &mut usize, col: &mut usize, n: usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            bump(&mut i, &mut col, 1);
        } else if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c == '/' && chars.get(i + 1) == Some(&'*') {
            i += 2;
            col += 2;
            loop {
                match chars.get(i) {
                    None => {
                        return Err(QasmError::Syntax {
                            line: tl,
                            col: tc,
                            message: "unterminated comment".into(),
                        })
                    }
                    Some('*') if chars.get(i + 1) == Some(&'/') => {
                        i += 2;
                        col += 2;
                        break;
                    }
                    Some('\n') => {
                        i += 1;
                        line += 1;
                        col = 1;
                    }
                    Some(_) => bump(&mut i, &mut col, 1),
                }
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: tl,
                col: tc,
            });
        } else if c.is_ascii_digit()
            || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
        {
            let start = i;
            let mut real = false;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if chars.get(i) == Some(&'.') {
                real = true;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if matches!(chars.get(i), Some('e' | 'E')) {
                let mut j = i + 1;
                if matches!(chars.get(j), Some('+' | '-')) {
                    j += 1;
                }
                if chars.get(j).is_some_and(|d| d.is_ascii_digit()) {
                    real = true;
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let bad = || QasmError::Syntax {
                line: tl,
                col: tc,
                message: format!("malformed number `{text}`"),
            };
            let tok = if real {
                Tok::Real(text.parse().map_err(|_| bad())?)
            } else {
                Tok::Int(text.parse().map_err(|_| bad())?)
            };
            out.push(Token {
                tok,
                line: tl,
                col: tc,
            });
        } else if c == '"' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if chars.get(i) != Some(&'"') {
                return Err(QasmError::Syntax {
                    line: tl,
                    col: tc,
                    message: "unterminated string".into(),
                });
            }
            let s: String = chars[start..i].iter().collect();
            i += 1;
            col += s.chars().count() + 2;
            out.push(Token {
                tok: Tok::Str(s),
                line: tl,
                col: tc,
            });
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            bump(&mut i, &mut col, 2);
            out.push(Token {
                tok: Tok::Arrow,
                line: tl,
                col: tc,
            });
        } else if "[](),;+-*/^{}=<>".contains(c) {
            bump(&mut i, &mut col, 1);
            out.push(Token {
                tok: Tok::Sym(c),
                line: tl,
                col: tc,
            });
        } else {
            return Err(QasmError::Syntax {
                line: tl,
                col: tc,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

/// An operand: a whole register or one element of it.
struct Operand {
    reg: usize,
    index: Option<usize>,
    line: usize,
    col: usize,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    qregs: Vec<(Register, usize)>,
    cregs: Vec<(Register, usize)>,
    gates: Vec<Gate>,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        match self.peek().or(self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (1, 1),
        }
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, QasmError> {
        let (line, col) = self.here();
        Err(QasmError::Syntax {
            line,
            col,
            message: message.into(),
        })
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Sym(s), .. }) if *s == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), QasmError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.syntax(format!("expected `{c}`"))
        }
    }

    fn expect_ident(&mut self) -> Result<Token, QasmError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(_), ..
            }) => Ok(self.next().unwrap()),
            _ => self.syntax("expected identifier"),
        }
    }

    fn expect_int(&mut self) -> Result<u64, QasmError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Int(v), ..
            }) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => self.syntax("expected integer"),
        }
    }

    fn parse_program(&mut self) -> Result<(), QasmError> {
        while let Some(tok) = self.peek().cloned() {
            let Tok::Ident(word) = &tok.tok else {
                return self.syntax("expected statement");
            };
            match word.as_str() {
                "OPENQASM" => {
                    self.pos += 1;
                    match self.next().map(|t| t.tok) {
                        Some(Tok::Real(v)) if (v - 2.0).abs() < 1e-9 => {}
                        Some(Tok::Int(2)) => {}
                        _ => {
                            return Err(QasmError::Unsupported {
                                line: tok.line,
                                col: tok.col,
                                construct: "OPENQASM version other than 2.0".into(),
                            })
                        }
                    }
                    self.expect_sym(';')?;
                }
                "include" => {
                    self.pos += 1;
                    match self.next().map(|t| t.tok) {
                        Some(Tok::Str(_)) => {}
                        _ => return self.syntax("expected file name after include"),
                    }
                    self.expect_sym(';')?;
                }
                "qreg" | "creg" => {
                    self.pos += 1;
                    self.parse_declaration(word == "qreg", &tok)?;
                }
                "gate" | "opaque" | "if" | "reset" => {
                    return Err(QasmError::Unsupported {
                        line: tok.line,
                        col: tok.col,
                        construct: word.clone(),
                    })
                }
                "measure" => {
                    self.pos += 1;
                    self.parse_measure(&tok)?;
                }
                "barrier" => {
                    self.pos += 1;
                    self.parse_barrier(&tok)?;
                }
                _ => {
                    self.pos += 1;
                    self.parse_gate(word, &tok)?;
                }
            }
        }
        Ok(())
    }

    fn parse_declaration(&mut self, quantum: bool, at: &Token) -> Result<(), QasmError> {
        let name_tok = self.expect_ident()?;
        let Tok::Ident(name) = name_tok.tok else {
            unreachable!()
        };
        self.expect_sym('[')?;
        let size = self.expect_int()? as usize;
        self.expect_sym(']')?;
        self.expect_sym(';')?;
        let taken = self
            .qregs
            .iter()
            .chain(self.cregs.iter())
            .any(|(r, _)| r.name == name);
        if taken {
            return Err(QasmError::Redeclared {
                line: at.line,
                col: at.col,
                name,
            });
        }
        let list = if quantum {
            &mut self.qregs
        } else {
            &mut self.cregs
        };
        let offset = list.iter().map(|(r, _)| r.size).sum();
        list.push((Register { name, size }, offset));
        Ok(())
    }

    fn parse_operand(&mut self, quantum: bool) -> Result<Operand, QasmError> {
        let tok = self.expect_ident()?;
        let Tok::Ident(name) = &tok.tok else {
            unreachable!()
        };
        let regs = if quantum { &self.qregs } else { &self.cregs };
        let Some(reg) = regs.iter().position(|(r, _)| &r.name == name) else {
            return Err(QasmError::UndeclaredRegister {
                line: tok.line,
                col: tok.col,
                name: name.clone(),
            });
        };
        let size = regs[reg].0.size;
        let index = if self.eat_sym('[') {
            let idx = self.expect_int()? as usize;
            self.expect_sym(']')?;
            if idx >= size {
                return Err(QasmError::IndexOutOfRange {
                    line: tok.line,
                    col: tok.col,
                    name: name.clone(),
                    index: idx,
                    size,
                });
            }
            Some(idx)
        } else {
            None
        };
        Ok(Operand {
            reg,
            index,
            line: tok.line,
            col: tok.col,
        })
    }

    fn operand_list(&mut self) -> Result<Vec<Operand>, QasmError> {
        let mut ops = vec![self.parse_operand(true)?];
        while self.eat_sym(',') {
            ops.push(self.parse_operand(true)?);
        }
        Ok(ops)
    }

    /// Expand broadcast operands into per-element flattened indices.
    fn expand(
        &self,
        ops: &[Operand],
        quantum: &[bool],
        at: &Token,
    ) -> Result<Vec<Vec<usize>>, QasmError> {
        let regs = |q: bool| if q { &self.qregs } else { &self.cregs };
        let mut width = None;
        for (op, &q) in ops.iter().zip(quantum) {
            if op.index.is_none() {
                let size = regs(q)[op.reg].0.size;
                match width {
                    None => width = Some(size),
                    Some(w) if w != size => {
                        return Err(QasmError::BroadcastMismatch {
                            line: op.line,
                            col: op.col,
                        })
                    }
                    _ => {}
                }
            }
        }
        let _ = at;
        let rows = width.unwrap_or(1);
        Ok((0..rows)
            .map(|k| {
                ops.iter()
                    .zip(quantum)
                    .map(|(op, &q)| regs(q)[op.reg].1 + op.index.unwrap_or(k))
                    .collect()
            })
            .collect())
    }

    fn parse_gate(&mut self, word: &str, at: &Token) -> Result<(), QasmError> {
        let kind = match word {
            "CX" => GateKind::Cx,
            "U" => GateKind::U3,
            other => other
                .parse::<GateKind>()
                .ok()
                .filter(|k| !matches!(k, GateKind::Measure | GateKind::Barrier))
                .ok_or_else(|| QasmError::Unsupported {
                    line: at.line,
                    col: at.col,
                    construct: format!("gate `{other}`"),
                })?,
        };
        let mut params = Vec::new();
        if self.eat_sym('(') && !self.eat_sym(')') {
            params.push(self.expr()?);
            while self.eat_sym(',') {
                params.push(self.expr()?);
            }
            self.expect_sym(')')?;
        }
        if params.len() != kind.num_params() {
            return Err(QasmError::Arity {
                line: at.line,
                col: at.col,
                gate: word.to_string(),
                what: "parameters",
                expected: kind.num_params(),
                found: params.len(),
            });
        }
        let ops = self.operand_list()?;
        self.expect_sym(';')?;
        let arity = kind.arity().expect("fixed arity");
        if ops.len() != arity {
            return Err(QasmError::Arity {
                line: at.line,
                col: at.col,
                gate: word.to_string(),
                what: "qubits",
                expected: arity,
                found: ops.len(),
            });
        }
        for qubits in self.expand(&ops, &vec![true; ops.len()], at)? {
            if qubits.len() == 2 && qubits[0] == qubits[1] {
                return Err(QasmError::RepeatedOperand {
                    line: at.line,
                    col: at.col,
                    gate: word.to_string(),
                });
            }
            self.gates
                .push(Gate::new(kind, qubits).with_params(params.clone()));
        }
        Ok(())
    }

    fn parse_measure(&mut self, at: &Token) -> Result<(), QasmError> {
        let q = self.parse_operand(true)?;
        match self.next().map(|t| t.tok) {
            Some(Tok::Arrow) => {}
            _ => return self.syntax("expected `->` in measure"),
        }
        let c = self.parse_operand(false)?;
        self.expect_sym(';')?;
        for pair in self.expand(&[q, c], &[true, false], at)? {
            self.gates
                .push(Gate::new(GateKind::Measure, vec![pair[0]]).with_cbit(pair[1]));
        }
        Ok(())
    }

    fn parse_barrier(&mut self, at: &Token) -> Result<(), QasmError> {
        let ops = self.operand_list()?;
        self.expect_sym(';')?;
        let mut qubits = Vec::new();
        for op in &ops {
            let (reg, offset) = &self.qregs[op.reg];
            match op.index {
                Some(i) => qubits.push(offset + i),
                None => qubits.extend(*offset..offset + reg.size),
            }
        }
        let mut sorted = qubits.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != qubits.len() {
            return Err(QasmError::RepeatedOperand {
                line: at.line,
                col: at.col,
                gate: "barrier".into(),
            });
        }
        self.gates.push(Gate::new(GateKind::Barrier, qubits));
        Ok(())
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<f64, QasmError> {
        let mut v = self.term()?;
        loop {
            if self.eat_sym('+') {
                v += self.term()?;
            } else if self.eat_sym('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<f64, QasmError> {
        let mut v = self.unary()?;
        loop {
            if self.eat_sym('*') {
                v *= self.unary()?;
            } else if self.eat_sym('/') {
                v /= self.unary()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<f64, QasmError> {
        if self.eat_sym('-') {
            return Ok(-self.unary()?);
        }
        if self.eat_sym('+') {
            return self.unary();
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<f64, QasmError> {
        if self.eat_sym('(') {
            let v = self.expr()?;
            self.expect_sym(')')?;
            return Ok(v);
        }
        match self.peek().cloned() {
            Some(Token {
                tok: Tok::Real(v), ..
            }) => {
                self.pos += 1;
                Ok(v)
            }
            Some(Token {
                tok: Tok::Int(v), ..
            }) => {
                self.pos += 1;
                Ok(v as f64)
            }
            Some(Token {
                tok: Tok::Ident(name),
                line,
                col,
            }) => {
                self.pos += 1;
                if name == "pi" {
                    Ok(std::f64::consts::PI)
                } else {
                    Err(QasmError::Unsupported {
                        line,
                        col,
                        construct: format!("`{name}` in angle expression"),
                    })
                }
            }
            Some(Token {
                tok: Tok::Sym('^'),
                line,
                col,
            }) => Err(QasmError::Unsupported {
                line,
                col,
                construct: "`^` in angle expression".into(),
            }),
            _ => self.syntax("expected angle expression"),
        }
    }
}

/// Parse OpenQASM 2.0 source. Quantum registers are flattened in
/// declaration order into one logical index space; classical registers
/// likewise.
pub fn parse(text: &str) -> Result<Circuit, QasmError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        qregs: Vec::new(),
        cregs: Vec::new(),
        gates: Vec::new(),
    };
    p.parse_program()?;
    let qregs: Vec<Register> = p.qregs.into_iter().map(|(r, _)| r).collect();
    let cregs: Vec<Register> = p.cregs.into_iter().map(|(r, _)| r).collect();
    let num_logical = qregs.iter().map(|r| r.size).sum();
    let mut circuit = Circuit {
        gates: Vec::new(),
        num_logical,
        qregs,
        cregs,
    };
    for g in p.gates {
        circuit.push(g);
    }
    Ok(circuit)
}

const INITIAL_TAG: &str = "// initial mapping:";
const FINAL_TAG: &str = "// final mapping:";
const INSERTED_TAG: &str = "// inserted";

/// Round to 12 significant digits and print the shortest decimal that
/// reproduces the rounded value.
pub fn format_angle(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_finite() {
            "0".into()
        } else {
            v.to_string()
        };
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("float");
    let s = format!("{rounded}");
    if s.contains('.') || s.contains('e') {
        s
    } else {
        // keep reals recognisable as reals
        format!("{s}.0")
    }
}

fn write_gate(out: &mut String, g: &Gate, creg_names: &[(String, usize)]) {
    match g.kind {
        GateKind::Measure => {
            let cb = g.cbit.unwrap_or(0);
            let (name, idx) = locate(creg_names, cb);
            let _ = write!(out, "measure q[{}] -> {}[{}];", g.qubits[0], name, idx);
        }
        _ => {
            out.push_str(g.kind.name());
            if !g.params.is_empty() {
                let ps: Vec<String> = g.params.iter().map(|&p| format_angle(p)).collect();
                let _ = write!(out, "({})", ps.join(","));
            }
            let qs: Vec<String> = g.qubits.iter().map(|q| format!("q[{q}]")).collect();
            let _ = write!(out, " {};", qs.join(","));
        }
    }
    if g.inserted {
        out.push(' ');
        out.push_str(INSERTED_TAG);
    }
    out.push('\n');
}

fn locate(cregs: &[(String, usize)], flat: usize) -> (&str, usize) {
    let mut offset = 0;
    for (name, size) in cregs {
        if flat < offset + size {
            return (name, flat - offset);
        }
        offset += size;
    }
    (
        &cregs.last().expect("creg").0,
        flat - offset + cregs.last().unwrap().1,
    )
}

fn creg_layout(cregs: &[Register], gates: &[Gate]) -> Vec<(String, usize)> {
    let mut layout: Vec<(String, usize)> = cregs.iter().map(|r| (r.name.clone(), r.size)).collect();
    let declared: usize = layout.iter().map(|(_, s)| s).sum();
    let needed = gates
        .iter()
        .filter_map(|g| g.cbit)
        .map(|c| c + 1)
        .max()
        .unwrap_or(0);
    if needed > declared {
        layout.push(("c_extra".into(), needed - declared));
    }
    layout
}

fn write_program(
    num_qubits: usize,
    gates: &[Gate],
    cregs: &[Register],
    header: &[String],
) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    for h in header {
        out.push_str(h);
        out.push('\n');
    }
    let _ = writeln!(out, "qreg q[{num_qubits}];");
    let layout = creg_layout(cregs, gates);
    for (name, size) in &layout {
        let _ = writeln!(out, "creg {name}[{size}];");
    }
    for g in gates {
        write_gate(&mut out, g, &layout);
    }
    out
}

/// Emit a routed circuit over a single physical register `q`. The header
/// records both mappings and router-inserted SWAPs carry an `// inserted`
/// trailer, so [`parse_mapped`] can recover the full value.
pub fn emit(mc: &MappedCircuit) -> String {
    let header = vec![
        format!("{INITIAL_TAG} {}", mc.initial_mapping.describe()),
        format!("{FINAL_TAG} {}", mc.final_mapping.describe()),
    ];
    write_program(mc.num_physical, &mc.gates, &mc.cregs, &header)
}

/// Emit a logical circuit (registers flattened into `q`).
pub fn emit_circuit(c: &Circuit) -> String {
    write_program(c.num_logical, &c.gates, &c.cregs, &[])
}

fn parse_mapping_line(rest: &str, num_physical: usize) -> Result<Mapping, QasmError> {
    let mut forward = BTreeMap::new();
    for item in rest.split_whitespace() {
        let bad = || QasmError::Syntax {
            line: 0,
            col: 0,
            message: format!("malformed mapping entry `{item}`"),
        };
        let (l, p) = item.split_once("->").ok_or_else(bad)?;
        let l: usize = l.parse().map_err(|_| bad())?;
        let p: usize = p.parse().map_err(|_| bad())?;
        forward.insert(l, p);
    }
    let fwd: Vec<usize> = forward.values().copied().collect();
    if forward.keys().copied().ne(0..fwd.len()) {
        return Err(QasmError::Syntax {
            line: 0,
            col: 0,
            message: "mapping must list logical qubits 0..n".into(),
        });
    }
    Ok(Mapping::new(fwd, num_physical)?)
}

/// Read back the output of [`emit`]. Without mapping headers the identity
/// placement is assumed.
pub fn parse_mapped(text: &str) -> Result<MappedCircuit, QasmError> {
    let circuit = parse(text)?;
    let num_physical = circuit.num_logical;
    let mut initial = None;
    let mut final_ = None;
    let mut inserted_lines = Vec::new();
    let mut stmt_lines = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix(INITIAL_TAG) {
            initial = Some(rest.to_string());
        } else if let Some(rest) = trimmed.strip_prefix(FINAL_TAG) {
            final_ = Some(rest.to_string());
        }
        let code = trimmed.split("//").next().unwrap_or("").trim();
        let is_gate = !code.is_empty()
            && !["OPENQASM", "include", "qreg", "creg"]
                .iter()
                .any(|k| code.starts_with(k));
        if is_gate {
            stmt_lines.push(i);
            if trimmed.ends_with(INSERTED_TAG) {
                inserted_lines.push(i);
            }
        }
    }
    let mut gates = circuit.gates;
    // emit writes one gate per line, so statement lines align with gates
    if stmt_lines.len() == gates.len() {
        for (g, line) in gates.iter_mut().zip(&stmt_lines) {
            g.inserted = inserted_lines.contains(line) && g.kind == GateKind::Swap;
        }
    }
    let num_logical = initial
        .as_deref()
        .map(|s| s.split_whitespace().count())
        .unwrap_or(num_physical);
    let initial_mapping = match initial {
        Some(s) => parse_mapping_line(&s, num_physical)?,
        None => Mapping::identity(num_logical, num_physical),
    };
    let final_mapping = match final_ {
        Some(s) => parse_mapping_line(&s, num_physical)?,
        None => initial_mapping.clone(),
    };
    Ok(MappedCircuit {
        gates,
        num_physical,
        initial_mapping,
        final_mapping,
        cregs: circuit.cregs,
    })
}

/// Replace each SWAP by three CX gates, `cx a,b; cx b,a; cx a,b`. The CX
/// gates keep the SWAP's `inserted` flag.
pub fn decompose_swaps(mc: &MappedCircuit) -> MappedCircuit {
    let mut gates = Vec::with_capacity(mc.gates.len());
    for g in &mc.gates {
        if g.kind == GateKind::Swap {
            let (a, b) = (g.qubits[0], g.qubits[1]);
            for qs in [[a, b], [b, a], [a, b]] {
                gates.push(Gate {
                    inserted: g.inserted,
                    ..Gate::new(GateKind::Cx, qs.to_vec())
                });
            }
        } else {
            gates.push(g.clone());
        }
    }
    for (i, g) in gates.iter_mut().enumerate() {
        g.id = i;
    }
    MappedCircuit {
        gates,
        ..mc.clone()
    }
}
