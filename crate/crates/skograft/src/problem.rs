//! `.p` problem files: one formula, possibly spread over several lines.
//! Lines whose first non-blank character is `%` or `#` are comments.

use skograft_core::formula::{parse, Formula, ParseError};

/// Parses a problem file. Comment lines are blanked rather than removed so
/// error positions refer to the file as written.
pub fn parse_problem(text: &str) -> Result<Formula, ParseError> {
    let cleaned: Vec<&str> = text
        .lines()
        .map(|l| {
            let t = l.trim_start();
            if t.starts_with('%') || t.starts_with('#') {
                ""
            } else {
                l
            }
        })
        .collect();
    parse(&cleaned.join("\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_are_skipped() {
        let f = parse_problem("% the drinker\n# goal\nexists x. (D(x) =>\n  forall y. D(y))\n").unwrap();
        assert_eq!(f, parse("exists x. (D(x) => forall y. D(y))").unwrap());
    }

    #[test]
    fn positions_count_comment_lines() {
        let err = parse_problem("% c\nP &").unwrap_err();
        assert_eq!(err.line, 2);
    }
}
