//! Specification generators for the benchmark models.

use std::fmt::Write;

use crate::ModelError;

/// A FIFO buffer of `capacity` cells over a data domain `{d1, .., dN}`,
/// with the liveness property "every read datum is eventually sent".
pub fn gen_buffer(capacity: usize, domain_size: usize) -> Result<String, ModelError> {
    if capacity == 0 || domain_size == 0 {
        return Err(ModelError::Generator("capacity and domain size must be positive".into()));
    }
    let ds: Vec<String> = (1..=domain_size).map(|i| format!("d{i}")).collect();
    Ok(format!(
        "sort D = {{{}}};
sort Q = List(D, {capacity});
proc Buffer(q: Q) =
    sum d: D . #q < {capacity} -> read(d) . Buffer(q := q ++ d)
  + q != [] -> send(head(q)) . Buffer(q := tail(q));
init Buffer([]);
form live = nu Y . (forall d: D . [read(d)] mu X . (<true>true && [!send(d)]X)) && [true]Y;
",
        ds.join(", ")
    ))
}

fn winning_lines(cols: usize, rows: usize, len: usize, cell: impl Fn(usize, usize) -> usize) -> Vec<Vec<usize>> {
    let mut lines = Vec::new();
    let dirs: [(isize, isize); 4] = [(1, 0), (0, 1), (1, 1), (1, -1)];
    for &(dc, dr) in &dirs {
        for c in 0..cols as isize {
            for r in 0..rows as isize {
                let (ec, er) = (c + dc * (len as isize - 1), r + dr * (len as isize - 1));
                if ec < 0 || ec >= cols as isize || er < 0 || er >= rows as isize {
                    continue;
                }
                lines.push(
                    (0..len as isize)
                        .map(|k| cell((c + dc * k) as usize, (r + dr * k) as usize))
                        .collect(),
                );
            }
        }
    }
    lines
}

/// Cell numbers (1-based) of every three-in-a-row on the Tic Tac Toe board.
pub fn tictactoe_lines() -> Vec<Vec<usize>> {
    winning_lines(3, 3, 3, |c, r| r * 3 + c + 1)
}

/// Cell numbers (1-based) of every four-in-a-row; column `c`, row `r`
/// (bottom row 0) is cell `c * rows + r + 1`.
pub fn connect_four_lines(cols: usize, rows: usize) -> Vec<Vec<usize>> {
    winning_lines(cols, rows, 4, |c, r| c * rows + r + 1)
}

/// Tic Tac Toe with parameters `b1..b9` and turn `p`: one move summand per
/// position and one self-loop `wins(b)` summand per line. The first formula
/// states that X can force a win; the second is the shorter variant that
/// also accepts a full board after X's last move.
pub fn gen_tictactoe() -> String {
    let mut s = String::from("sort Piece = {e, X, O};\nproc TicTacToe(");
    let cells: Vec<String> = (1..=9).map(|k| format!("b{k}: Piece")).collect();
    write!(s, "{}, p: Piece) =\n", cells.join(", ")).unwrap();
    let mut summands = Vec::new();
    for k in 1..=9 {
        summands.push(format!(
            "b{k} == e -> move(p) . TicTacToe(b{k} := p, p := if(p == X, O, X))"
        ));
    }
    for line in tictactoe_lines() {
        let [a, b, c] = [line[0], line[1], line[2]];
        summands.push(format!(
            "b{a} != e && b{a} == b{b} && b{b} == b{c} -> wins(b{a}) . TicTacToe()"
        ));
    }
    s.push_str("    ");
    s.push_str(&summands.join("\n  + "));
    s.push_str(";\ninit TicTacToe(");
    s.push_str(&vec!["e"; 9].join(", "));
    s.push_str(", X);\n");
    s.push_str("form win = mu Z . [wins(O)]false && <move(X)> mu C . (<wins(X)>true || (<move(O)>true && [move(O)]Z));\n");
    s.push_str("form short = mu Z . [wins(O)]false && <move(X)>(<wins(X)>true || [move(O)]Z);\n");
    s
}

/// Connect Four on a `cols` x `rows` board. Yellow (`Y`) moves first; one
/// move summand per column and, per player, one `wins` summand for every
/// window of four adjacent columns. The formula states that Yellow can
/// force a win.
pub fn gen_connect_four(cols: usize, rows: usize) -> Result<String, ModelError> {
    if cols == 0 || rows == 0 || cols * rows > 42 {
        return Err(ModelError::Generator(format!(
            "board {cols}x{rows} outside 1 <= cols * rows <= 42"
        )));
    }
    let n = cols * rows;
    let cell = |c: usize, r: usize| c * rows + r + 1;
    let mut s = String::from("sort Piece = {e, Y, R};\nproc ConnectFour(");
    let cells: Vec<String> = (1..=n).map(|k| format!("b{k}: Piece")).collect();
    write!(s, "{}, p: Piece) =\n", cells.join(", ")).unwrap();
    let mut summands = Vec::new();
    for c in 0..cols {
        let mut updates = Vec::new();
        for r in 0..rows {
            let k = cell(c, r);
            let below = if r == 0 {
                String::new()
            } else {
                format!(" && b{} != e", cell(c, r - 1))
            };
            updates.push(format!("b{k} := if(b{k} == e{below}, p, b{k})"));
        }
        summands.push(format!(
            "b{} == e -> move(p) . ConnectFour({}, p := if(p == Y, R, Y))",
            cell(c, rows - 1),
            updates.join(", ")
        ));
    }
    // lines are grouped by the 4-column window holding their leftmost column
    let windows = cols.saturating_sub(3).max(1);
    let lines = connect_four_lines(cols, rows);
    for who in ["Y", "R"] {
        for w in 0..windows {
            let any: Vec<String> = lines
                .iter()
                .filter(|l| ((l[0] - 1) / rows).min(windows - 1) == w)
                .map(|l| {
                    let cs: Vec<String> = l.iter().map(|k| format!("b{k} == {who}")).collect();
                    format!("({})", cs.join(" && "))
                })
                .collect();
            if !any.is_empty() {
                summands.push(format!("{} -> wins({who}) . ConnectFour()", any.join(" || ")));
            }
        }
    }
    s.push_str("    ");
    s.push_str(&summands.join("\n  + "));
    s.push_str(";\ninit ConnectFour(");
    s.push_str(&vec!["e"; n].join(", "));
    s.push_str(", Y);\n");
    s.push_str("form win = mu X . [wins(R)]false && <move>(<wins(Y)>true || [move]X);\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_counts() {
        assert_eq!(tictactoe_lines().len(), 8);
        assert_eq!(connect_four_lines(7, 6).len(), 69);
        assert_eq!(connect_four_lines(4, 4).len(), 10);
        assert!(connect_four_lines(3, 3).is_empty());
    }

    #[test]
    fn bad_dimensions() {
        assert!(gen_connect_four(7, 7).is_err());
        assert!(gen_buffer(0, 2).is_err());
    }
}
