//! Generation parameters and their validation.

use std::fmt;

use crate::error::ParamError;
use crate::spec::{LengthSpec, Method, PropRateSpec};

/// Full configuration of one generator run.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GenParams {
    /// maximum modal depth `d`
    pub depth: usize,
    /// number of box symbols `m`
    pub boxes: u32,
    /// number of top-level clauses `L`
    pub clauses: usize,
    /// number of propositional variables `N`
    pub vars: u32,
    pub lengths: LengthSpec,
    pub props: PropRateSpec,
    pub method: Method,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// A validation finding, located at a (nesting depth, clause length,
/// propositional count) coordinate when one applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub depth: Option<usize>,
    pub length: Option<usize>,
    pub props: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    fn error(depth: Option<usize>, length: Option<usize>, props: Option<usize>, message: String) -> Self {
        Diagnostic { severity: Severity::Error, depth, length, props, message }
    }

    fn warning(depth: usize, length: usize, props: Option<usize>, message: String) -> Self {
        Diagnostic { severity: Severity::Warning, depth: Some(depth), length: Some(length), props, message }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}")?;
        let mut coord = Vec::new();
        if let Some(d) = self.depth {
            coord.push(format!("depth {d}"));
        }
        if let Some(l) = self.length {
            coord.push(format!("length {l}"));
        }
        if let Some(r) = self.props {
            coord.push(format!("props {r}"));
        }
        if !coord.is_empty() {
            write!(f, " [{}]", coord.join(", "))?;
        }
        write!(f, ": {}", self.message)
    }
}

impl GenParams {
    /// Checks every (depth, length, props) combination the generator can reach.
    ///
    /// Returns the warnings on success. Warnings flag top-level clauses that
    /// may be purely propositional or unary; both are legal but tend to make
    /// instances trivial.
    pub fn validate(&self) -> Result<Vec<Diagnostic>, ParamError> {
        let mut errors = Vec::new();
        let mut warnings = Vec::new();
        if self.boxes < 1 {
            errors.push(Diagnostic::error(None, None, None, "need at least one box symbol (m >= 1)".into()));
        }
        if self.vars < 1 {
            errors.push(Diagnostic::error(None, None, None, "need at least one variable (N >= 1)".into()));
        }
        if self.clauses < 1 {
            errors.push(Diagnostic::error(None, None, None, "need at least one clause (L >= 1)".into()));
        }
        let n = self.vars as usize;

        let mut nesting = 0;
        let mut reachable = true;
        while reachable && nesting <= self.depth {
            reachable = false;
            let remaining = self.depth - nesting;
            let weights = self.lengths.at_depth(nesting);
            if weights.iter().all(|&w| w == 0) {
                errors.push(Diagnostic::error(
                    Some(nesting),
                    None,
                    None,
                    "clause-length weights are all zero".into(),
                ));
                break;
            }
            for (j, _) in weights.iter().enumerate().filter(|(_, &w)| w > 0) {
                let k = j + 1;
                if remaining == 0 {
                    if k > n {
                        errors.push(Diagnostic::error(
                            Some(nesting),
                            Some(k),
                            Some(k),
                            format!("needs {k} distinct propositional atoms but N = {n}"),
                        ));
                    }
                    continue;
                }
                let Some(pw) = self.props.weights(nesting, k) else {
                    errors.push(Diagnostic::error(
                        Some(nesting),
                        Some(k),
                        None,
                        "no propositional-count weights for a reachable clause length".into(),
                    ));
                    continue;
                };
                if pw.len() != k + 1 {
                    errors.push(Diagnostic::error(
                        Some(nesting),
                        Some(k),
                        None,
                        format!("propositional-count list has {} entries, expected {}", pw.len(), k + 1),
                    ));
                    continue;
                }
                if pw.iter().all(|&w| w == 0) {
                    errors.push(Diagnostic::error(
                        Some(nesting),
                        Some(k),
                        None,
                        "propositional-count weights are all zero".into(),
                    ));
                    continue;
                }
                for (r, _) in pw.iter().enumerate().filter(|(_, &w)| w > 0) {
                    if r > n {
                        errors.push(Diagnostic::error(
                            Some(nesting),
                            Some(k),
                            Some(r),
                            format!("needs {r} distinct propositional atoms but N = {n}"),
                        ));
                    }
                    if r < k {
                        reachable = true;
                    }
                }
                if nesting == 0 && pw[k] > 0 {
                    warnings.push(Diagnostic::warning(
                        0,
                        k,
                        Some(k),
                        "top-level clauses may be purely propositional".into(),
                    ));
                }
            }
            if nesting == 0 && weights[0] > 0 && self.depth > 0 {
                warnings.push(Diagnostic::warning(0, 1, None, "top-level unary clauses possible".into()));
            }
            nesting += 1;
        }

        if errors.is_empty() {
            Ok(warnings)
        } else {
            Err(ParamError(errors))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{parse_length_spec, parse_prop_spec};

    pub(crate) fn params(depth: usize, vars: u32, c: &str, p: &str) -> GenParams {
        GenParams {
            depth,
            boxes: 1,
            clauses: 4,
            vars,
            lengths: parse_length_spec(c).unwrap(),
            props: parse_prop_spec(p).unwrap(),
            method: Method::New,
            seed: 0,
        }
    }

    #[test]
    fn example_params_are_valid() {
        let gp = params(2, 4, "[[0, 1, 1], [1, 2], [1]]", "[[[], [0, 1, 0], [0, 1, 0, 0]], [[1, 0], [0, 1, 0]]]");
        assert_eq!(gp.validate().unwrap(), vec![]);
    }

    #[test]
    fn pigeonhole_at_deepest_level() {
        let gp = params(1, 2, "[[0, 1], [0, 0, 1]]", "[[[], [1, 1, 0]]]");
        let err = gp.validate().unwrap_err();
        assert_eq!(err.0.len(), 1);
        assert_eq!((err.0[0].depth, err.0[0].length), (Some(1), Some(3)));
    }

    #[test]
    fn too_many_props_requested() {
        let gp = params(1, 1, "[[0, 1], [1]]", "[[[], [0, 0, 1]]]");
        let err = gp.validate().unwrap_err();
        assert_eq!(err.0[0].props, Some(2));
    }

    #[test]
    fn missing_prop_list_is_error() {
        let gp = params(1, 3, "[[1, 1], [1]]", "[[[], [0, 1, 0]]]");
        let err = gp.validate().unwrap_err();
        assert_eq!((err.0[0].depth, err.0[0].length), (Some(0), Some(1)));
        let gp = params(1, 3, "[[0, 1], [1]]", "[[[], [0, 1]]]");
        assert!(gp.validate().is_err());
        let gp = params(1, 3, "[[0, 1], [1]]", "[[[], [0, 0, 0]]]");
        assert!(gp.validate().is_err());
        let gp = params(1, 3, "[[0, 0], [1]]", "[[[], [0, 1, 0]]]");
        assert!(gp.validate().is_err());
    }

    #[test]
    fn trailing_zero_gives_no_propositional_warning() {
        let gp = params(1, 3, "[[0, 0, 1], [0, 0, 1]]", "[[[], [], [0, 3, 3, 0]]]");
        assert_eq!(gp.validate().unwrap(), vec![]);
        let gp = params(1, 3, "[[0, 0, 1], [0, 0, 1]]", "[[[], [], [1, 3, 3, 1]]]");
        let w = gp.validate().unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].props, Some(3));
    }

    #[test]
    fn unary_top_clause_warning() {
        let gp = params(1, 3, "[[1, 1], [1]]", "[[[1, 0], [0, 1, 0]]]");
        let w = gp.validate().unwrap();
        assert_eq!(w.len(), 1);
        assert!(w[0].message.contains("unary"));
        assert_eq!(w[0].length, Some(1));
    }

    #[test]
    fn unreachable_levels_are_not_checked() {
        // all-propositional at the top: nesting 1 never reached, so its
        // impossible length does not matter
        let gp = params(1, 2, "[[0, 1], [0, 0, 0, 9]]", "[[[], [0, 0, 1]]]");
        assert!(gp.validate().is_ok());
    }

    #[test]
    fn structural_errors() {
        let mut gp = params(0, 1, "[[1]]", "[]");
        gp.boxes = 0;
        assert!(gp.validate().is_err());
        let mut gp = params(0, 1, "[[1]]", "[]");
        gp.clauses = 0;
        assert!(gp.validate().is_err());
    }
}
