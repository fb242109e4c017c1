use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Arc, DiagramError, LinkDiagram, TwistBox};

/// Parses `PD[X[a,b,c,d],...,T[id,p,q,h],O[a]]`.
pub fn parse_pd(text: &str) -> Result<LinkDiagram, DiagramError> {
    let mut p = Parser { s: text.as_bytes(), i: 0 };
    p.ws();
    p.expect_word("PD")?;
    p.expect(b'[')?;
    let mut tuples = Vec::new();
    let mut loops = Vec::new();
    let mut boxes = Vec::new();
    p.ws();
    if !p.peek_is(b']') {
        loop {
            p.ws();
            let at = p.i;
            match p.bump() {
                Some(b'X') => {
                    p.expect(b'[')?;
                    let mut t = [0; 4];
                    for (k, slot) in t.iter_mut().enumerate() {
                        if k > 0 {
                            p.expect(b',')?;
                        }
                        *slot = p.arc()?;
                    }
                    p.expect(b']')?;
                    tuples.push(t);
                }
                Some(b'T') => {
                    p.expect(b'[')?;
                    p.ws();
                    let id = p.ident()?;
                    p.expect(b',')?;
                    let a = p.arc()?;
                    p.expect(b',')?;
                    let b = p.arc()?;
                    p.expect(b',')?;
                    let h = p.int()?;
                    p.ws();
                    if p.peek_is(b',') {
                        return Err(p.err("twist boxes take exactly two strands"));
                    }
                    p.expect(b']')?;
                    if h != 1 && h != -1 {
                        return Err(DiagramError::Parse { offset: at, msg: "handedness must be 1 or -1".into() });
                    }
                    boxes.push(TwistBox { id, strand_pair: (a, b), handedness: h as i8 });
                }
                Some(b'O') => {
                    p.expect(b'[')?;
                    loops.push(p.arc()?);
                    p.expect(b']')?;
                }
                _ => return Err(DiagramError::Parse { offset: at, msg: "expected X[, T[ or O[".into() }),
            }
            p.ws();
            if p.peek_is(b',') {
                p.i += 1;
                continue;
            }
            break;
        }
    }
    p.expect(b']')?;
    p.ws();
    if p.i != p.s.len() {
        return Err(p.err("trailing input"));
    }
    LinkDiagram::from_pd_tuples(&tuples, &loops, boxes)
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> DiagramError {
        DiagramError::Parse { offset: self.i, msg: msg.to_string() }
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek_is(&self, c: u8) -> bool {
        self.s.get(self.i) == Some(&c)
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.s.get(self.i).copied();
        self.i += 1;
        c
    }

    fn expect(&mut self, c: u8) -> Result<(), DiagramError> {
        self.ws();
        if self.peek_is(c) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<(), DiagramError> {
        if self.s[self.i..].starts_with(w.as_bytes()) {
            self.i += w.len();
            Ok(())
        } else {
            Err(self.err(&format!("expected `{w}`")))
        }
    }

    fn int(&mut self) -> Result<i64, DiagramError> {
        self.ws();
        let start = self.i;
        if self.peek_is(b'-') || self.peek_is(b'+') {
            self.i += 1;
        }
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        std::str::from_utf8(&self.s[start..self.i])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or(DiagramError::Parse { offset: start, msg: "expected integer".into() })
    }

    fn arc(&mut self) -> Result<Arc, DiagramError> {
        self.ws();
        let at = self.i;
        let v = self.int()?;
        if v <= 0 || v > u32::MAX as i64 {
            return Err(DiagramError::Parse { offset: at, msg: "arc labels must be positive".into() });
        }
        Ok(v as Arc)
    }

    fn ident(&mut self) -> Result<String, DiagramError> {
        let start = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected twist box identifier"));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.i]).into_owned())
    }
}

impl fmt::Display for LinkDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items: Vec<String> = self
            .crossings()
            .iter()
            .map(|c| {
                let [a, b, c, d] = c.strands;
                format!("X[{a},{b},{c},{d}]")
            })
            .collect();
        for b in self.twist_boxes() {
            items.push(format!("T[{},{},{},{}]", b.id, b.strand_pair.0, b.strand_pair.1, b.handedness));
        }
        for l in self.loops() {
            items.push(format!("O[{l}]"));
        }
        write!(f, "PD[{}]", items.join(","))
    }
}

/// JSON form of a diagram; same content as the PD text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub crossings: Vec<[Arc; 4]>,
    #[serde(default)]
    pub twist_boxes: Vec<TwistBox>,
    #[serde(default)]
    pub loops: Vec<Arc>,
}

impl From<&LinkDiagram> for DiagramJson {
    fn from(d: &LinkDiagram) -> Self {
        DiagramJson {
            name: d.name().map(str::to_string),
            crossings: d.crossings().iter().map(|c| c.strands).collect(),
            twist_boxes: d.twist_boxes().to_vec(),
            loops: d.loops().to_vec(),
        }
    }
}

impl TryFrom<DiagramJson> for LinkDiagram {
    type Error = DiagramError;

    fn try_from(j: DiagramJson) -> Result<Self, DiagramError> {
        let d = LinkDiagram::from_pd_tuples(&j.crossings, &j.loops, j.twist_boxes)?;
        Ok(match j.name {
            Some(n) => d.with_name(n),
            None => d,
        })
    }
}

pub fn parse_pd_json(text: &str) -> Result<LinkDiagram, DiagramError> {
    let j: DiagramJson = serde_json::from_str(text).map_err(|e| DiagramError::Parse {
        offset: byte_offset(text, e.line(), e.column()),
        msg: e.to_string(),
    })?;
    LinkDiagram::try_from(j)
}

fn byte_offset(text: &str, line: usize, col: usize) -> usize {
    text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum::<usize>() + col.saturating_sub(1)
}

impl LinkDiagram {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&DiagramJson::from(self)).expect("diagram serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_agree() {
        let src = "PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2], T[g,1,3,-1]]";
        let a = parse_pd(src).unwrap();
        let b = parse_pd_json(&a.to_json()).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_pd(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn errors_carry_offsets() {
        match parse_pd("PD[X[1,2,3]]") {
            Err(DiagramError::Parse { offset, .. }) => assert_eq!(offset, 10),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_pd("PD[X[1,0,1,0]]"), Err(DiagramError::Parse { offset: 7, .. })));
        assert!(matches!(parse_pd("PD[T[g,1,2,3,4]]"), Err(DiagramError::Parse { .. })));
        assert!(matches!(parse_pd("{\"crossings\": 3}").err(), Some(DiagramError::Parse { offset: 0, .. })));
    }
}
