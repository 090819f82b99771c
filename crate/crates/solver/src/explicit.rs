use std::fmt;

use crate::{Player, SolveError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub priority: usize,
    pub owner: Player,
    pub succ: Vec<usize>,
    pub label: Option<String>,
}

/// A parity game over vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitGame {
    pub vertices: Vec<Vertex>,
    pub init: usize,
}

/// Winning regions as sorted vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExplicitSets {
    pub eloise: Vec<usize>,
    pub abelard: Vec<usize>,
}

impl ExplicitSets {
    pub fn winner_of(&self, v: usize) -> Option<Player> {
        if self.eloise.binary_search(&v).is_ok() {
            Some(Player::Eloise)
        } else if self.abelard.binary_search(&v).is_ok() {
            Some(Player::Abelard)
        } else {
            None
        }
    }
}

fn err(line: usize, msg: impl Into<String>) -> SolveError {
    SolveError::Parse { line, msg: msg.into() }
}

fn number(line: usize, tok: &str, what: &str) -> Result<usize, SolveError> {
    tok.parse().map_err(|_| err(line, format!("bad {what} `{tok}`")))
}

impl ExplicitGame {
    /// Parses PGSolver text. Every id in `0..=maxid` must be defined exactly
    /// once; the initial vertex is given by an optional `start <id>;` line and
    /// defaults to 0.
    pub fn parse(text: &str) -> Result<ExplicitGame, SolveError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| err(1, "empty input"))?;
        let max = header
            .strip_prefix("parity ")
            .and_then(|r| r.strip_suffix(';'))
            .ok_or_else(|| err(hl, "expected `parity <maxid>;`"))?;
        let n = number(hl, max.trim(), "maximum id")? + 1;
        let mut slots: Vec<Option<Vertex>> = vec![None; n];
        let mut init = 0;
        for (ln, line) in lines {
            let body = line.strip_suffix(';').ok_or_else(|| err(ln, "missing `;`"))?;
            if let Some(s) = body.strip_prefix("start ") {
                init = number(ln, s.trim(), "start vertex")?;
                continue;
            }
            let (fields, label) = match body.find('"') {
                Some(q) => {
                    let rest = &body[q + 1..];
                    let label = rest.strip_suffix('"').ok_or_else(|| err(ln, "unterminated label"))?;
                    (&body[..q], Some(label.to_string()))
                }
                None => (body, None),
            };
            let toks: Vec<&str> = fields.split_whitespace().collect();
            if toks.len() < 3 || toks.len() > 4 {
                return Err(err(ln, "expected `<id> <priority> <owner> <successors>`"));
            }
            let id = number(ln, toks[0], "id")?;
            let priority = number(ln, toks[1], "priority")?;
            let owner = match toks[2] {
                "0" => Player::Eloise,
                "1" => Player::Abelard,
                o => return Err(err(ln, format!("bad owner `{o}`"))),
            };
            let mut succ = Vec::new();
            if let Some(s) = toks.get(3) {
                for t in s.split(',') {
                    let t = number(ln, t, "successor")?;
                    if t >= n {
                        return Err(err(ln, format!("successor {t} out of range")));
                    }
                    succ.push(t);
                }
            }
            let slot = slots.get_mut(id).ok_or_else(|| err(ln, format!("id {id} out of range")))?;
            if slot.is_some() {
                return Err(err(ln, format!("vertex {id} defined twice")));
            }
            *slot = Some(Vertex { priority, owner, succ, label });
        }
        let vertices = slots
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| err(0, format!("vertex {i} missing"))))
            .collect::<Result<Vec<_>, _>>()?;
        if init >= n {
            return Err(err(0, format!("start vertex {init} out of range")));
        }
        Ok(ExplicitGame { vertices, init })
    }

    fn preds(&self) -> Vec<Vec<usize>> {
        let mut p = vec![Vec::new(); self.vertices.len()];
        for (i, v) in self.vertices.iter().enumerate() {
            let mut s = v.succ.clone();
            s.sort_unstable();
            s.dedup();
            for t in s {
                p[t].push(i);
            }
        }
        p
    }
}

impl fmt::Display for ExplicitGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "parity {};", self.vertices.len().saturating_sub(1))?;
        if self.init != 0 {
            writeln!(f, "start {};", self.init)?;
        }
        for (i, v) in self.vertices.iter().enumerate() {
            let succ: Vec<String> = v.succ.iter().map(|x| x.to_string()).collect();
            write!(f, "{i} {} {} {}", v.priority, v.owner.code(), succ.join(","))?;
            match &v.label {
                Some(l) => writeln!(f, " \"{l}\";")?,
                None => writeln!(f, ";")?,
            }
        }
        Ok(())
    }
}

/// Vertices of `sub` from which `p` forces a visit to `target`. An opponent
/// vertex without successors in `sub` is attracted as well, since its owner
/// loses there.
pub fn attractor_explicit(g: &ExplicitGame, sub: &[bool], p: Player, target: &[bool]) -> Vec<bool> {
    attract(g, &g.preds(), sub, p, target)
}

fn attract(g: &ExplicitGame, preds: &[Vec<usize>], sub: &[bool], p: Player, target: &[bool]) -> Vec<bool> {
    let n = g.vertices.len();
    let mut count = vec![0usize; n];
    let mut a = vec![false; n];
    let mut queue = Vec::new();
    for i in 0..n {
        if !sub[i] {
            continue;
        }
        let mut s: Vec<usize> = g.vertices[i].succ.iter().copied().filter(|&t| sub[t]).collect();
        s.sort_unstable();
        s.dedup();
        count[i] = s.len();
        if target[i] || (g.vertices[i].owner != p && count[i] == 0) {
            a[i] = true;
            queue.push(i);
        }
    }
    while let Some(u) = queue.pop() {
        for &w in &preds[u] {
            if !sub[w] || a[w] {
                continue;
            }
            if g.vertices[w].owner == p {
                a[w] = true;
                queue.push(w);
            } else {
                count[w] -= 1;
                if count[w] == 0 {
                    a[w] = true;
                    queue.push(w);
                }
            }
        }
    }
    a
}

/// Zielonka's algorithm over adjacency lists.
pub fn solve_explicit(g: &ExplicitGame) -> ExplicitSets {
    let preds = g.preds();
    let all = vec![true; g.vertices.len()];
    let [e, a] = solve_rec(g, &preds, all);
    let pick = |w: Vec<bool>| w.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i).collect();
    ExplicitSets {
        eloise: pick(e),
        abelard: pick(a),
    }
}

fn index(p: Player) -> usize {
    p.code() as usize
}

fn solve_rec(g: &ExplicitGame, preds: &[Vec<usize>], sub: Vec<bool>) -> [Vec<bool>; 2] {
    let n = g.vertices.len();
    let Some(d) = (0..n).filter(|&i| sub[i]).map(|i| g.vertices[i].priority).min() else {
        return [vec![false; n], vec![false; n]];
    };
    // a stuck vertex is lost by its owner: peel off what the other player
    // can force into such vertices before the priority step
    for stuck in [Player::Eloise, Player::Abelard] {
        let dead: Vec<bool> = (0..n)
            .map(|i| sub[i] && g.vertices[i].owner == stuck && !g.vertices[i].succ.iter().any(|&t| sub[t]))
            .collect();
        if dead.iter().any(|&x| x) {
            let x = attract(g, preds, &sub, stuck.opponent(), &dead);
            let rest: Vec<bool> = (0..n).map(|i| sub[i] && !x[i]).collect();
            let mut w = solve_rec(g, preds, rest);
            for i in 0..n {
                if x[i] {
                    w[index(stuck.opponent())][i] = true;
                }
            }
            return w;
        }
    }
    let p = if d % 2 == 0 { Player::Eloise } else { Player::Abelard };
    let q = p.opponent();
    let top: Vec<bool> = (0..n).map(|i| sub[i] && g.vertices[i].priority == d).collect();
    let a = attract(g, preds, &sub, p, &top);
    let rest: Vec<bool> = (0..n).map(|i| sub[i] && !a[i]).collect();
    let w1 = solve_rec(g, preds, rest);
    if !w1[index(q)].iter().any(|&x| x) {
        let mut out = [vec![false; n], vec![false; n]];
        out[index(p)] = sub;
        return out;
    }
    let b = attract(g, preds, &sub, q, &w1[index(q)]);
    let rest: Vec<bool> = (0..n).map(|i| sub[i] && !b[i]).collect();
    let mut w2 = solve_rec(g, preds, rest);
    for i in 0..n {
        if b[i] {
            w2[index(q)][i] = true;
        }
    }
    w2
}
