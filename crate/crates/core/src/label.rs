//! Test-function labels.
//!
//! A label names a test function: either an external symbol such as `f`, or
//! the test-function-valued form `xi(g..; f..)` produced by the deformed
//! commutator. Both carry a conjugation flag.
//!
//! Canonicalization is mode dependent. In both modes a `xi` nested inside an
//! argument list is spliced into its parent: an entry `xi(C;D)` in an
//! anti-linear slot contributes `D` to the anti-linear list and `C` to the
//! linear list, and in a linear slot it contributes `C` anti-linear and `D`
//! linear. In classical mode every anti-linear entry is additionally
//! conjugated into the linear list, so canonical classical labels have the
//! shape `xi(; X)`, and conjugation distributes over the arguments.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// Which algebra the engine works in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Mode {
    Quantum,
    /// The classical random field: `G(-u) = conj(G(u))`, which makes every
    /// form symmetric across its two slot lists after conjugation.
    #[default]
    Classical,
}

const XI_NAME: &str = "xi";

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct LabelData {
    name: Arc<str>,
    starred: bool,
    kind: LabelKind,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum LabelKind {
    External,
    Xi { anti: Vec<Label>, lin: Vec<Label> },
}

/// An immutable, cheaply clonable test-function label.
///
/// The total order is lexicographic on (name, starred, kind, xi arguments).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<LabelData>);

impl Label {
    pub fn external(name: &str) -> Label {
        Label(Arc::new(LabelData {
            name: Arc::from(name),
            starred: false,
            kind: LabelKind::External,
        }))
    }

    /// A raw `xi(anti; lin)` label. The argument lists are sorted but not
    /// flattened; use [`canonical_label`] for that.
    pub fn xi(mut anti: Vec<Label>, mut lin: Vec<Label>) -> Label {
        anti.sort();
        lin.sort();
        Label(Arc::new(LabelData {
            name: Arc::from(XI_NAME),
            starred: false,
            kind: LabelKind::Xi { anti, lin },
        }))
    }

    fn with_star(&self, starred: bool) -> Label {
        if self.0.starred == starred {
            return self.clone();
        }
        let mut data = (*self.0).clone();
        data.starred = starred;
        Label(Arc::new(data))
    }

    /// Formal conjugation: toggles the flag without touching arguments.
    /// `star(star(l)) == l` always holds.
    pub fn star(&self) -> Label {
        self.with_star(!self.0.starred)
    }

    pub fn is_starred(&self) -> bool {
        self.0.starred
    }

    pub fn is_xi(&self) -> bool {
        matches!(self.0.kind, LabelKind::Xi { .. })
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    /// `(anti, lin)` argument lists of a xi label.
    pub fn xi_args(&self) -> Option<(&[Label], &[Label])> {
        match &self.0.kind {
            LabelKind::Xi { anti, lin } => Some((anti, lin)),
            LabelKind::External => None,
        }
    }

    /// Power of lambda carried by this label: `m + n - 1` for every xi with
    /// `m + n` arguments, summed over nesting; zero for external symbols.
    pub fn lambda_content(&self) -> u32 {
        match &self.0.kind {
            LabelKind::External => 0,
            LabelKind::Xi { anti, lin } => {
                let own = (anti.len() + lin.len()) as u32;
                let nested: u32 = anti.iter().chain(lin).map(Label::lambda_content).sum();
                own.saturating_sub(1) + nested
            }
        }
    }

    /// Distinct external symbol names reachable from this label.
    pub fn collect_symbols(&self, out: &mut Vec<Arc<str>>) {
        match &self.0.kind {
            LabelKind::External => {
                if !out.iter().any(|s| **s == *self.0.name) {
                    out.push(self.0.name.clone());
                }
            }
            LabelKind::Xi { anti, lin } => {
                for l in anti.iter().chain(lin) {
                    l.collect_symbols(out);
                }
            }
        }
    }
}

/// Conjugates a label that is already canonical for `mode`.
pub fn conjugate(label: &Label, mode: Mode) -> Label {
    match (&label.0.kind, mode) {
        (LabelKind::External, _) | (LabelKind::Xi { .. }, Mode::Quantum) => label.star(),
        (LabelKind::Xi { lin, .. }, Mode::Classical) => {
            let conj: Vec<Label> = lin.iter().map(|l| conjugate(l, mode)).collect();
            Label::xi(Vec::new(), conj)
        }
    }
}

/// Canonical form of a label in `mode`.
pub fn canonical_label(label: &Label, mode: Mode) -> Label {
    match &label.0.kind {
        LabelKind::External => label.clone(),
        LabelKind::Xi { anti, lin } => {
            let (a, l) = splice_slots(anti, lin, mode, true);
            let flat = Label::xi(a, l);
            if !label.0.starred {
                flat
            } else {
                match mode {
                    Mode::Quantum => flat.star(),
                    Mode::Classical => conjugate(&flat, mode),
                }
            }
        }
    }
}

/// Flattens a pair of slot lists (the arguments of a xi label or of a form).
/// `canonicalize_children` is false only when the caller already holds
/// canonical children.
pub fn splice_slots(
    anti: &[Label],
    lin: &[Label],
    mode: Mode,
    canonicalize_children: bool,
) -> (Vec<Label>, Vec<Label>) {
    let canon = |l: &Label| {
        if canonicalize_children {
            canonical_label(l, mode)
        } else {
            l.clone()
        }
    };
    let mut out_anti = Vec::with_capacity(anti.len());
    let mut out_lin = Vec::with_capacity(lin.len() + anti.len());
    match mode {
        Mode::Quantum => {
            for c in anti {
                let c = canon(c);
                match (&c.0.kind, c.0.starred) {
                    (LabelKind::Xi { anti: ca, lin: cl }, false) => {
                        out_anti.extend(cl.iter().cloned());
                        out_lin.extend(ca.iter().cloned());
                    }
                    _ => out_anti.push(c),
                }
            }
            for c in lin {
                let c = canon(c);
                match (&c.0.kind, c.0.starred) {
                    (LabelKind::Xi { anti: ca, lin: cl }, false) => {
                        out_anti.extend(ca.iter().cloned());
                        out_lin.extend(cl.iter().cloned());
                    }
                    _ => out_lin.push(c),
                }
            }
        }
        Mode::Classical => {
            let mut push = |c: Label| match &c.0.kind {
                LabelKind::Xi { lin: cl, .. } => out_lin.extend(cl.iter().cloned()),
                LabelKind::External => out_lin.push(c),
            };
            for c in anti {
                let c = canon(c);
                push(conjugate(&c, mode));
            }
            for c in lin {
                push(canon(c));
            }
        }
    }
    out_anti.sort();
    out_lin.sort();
    (out_anti, out_lin)
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            LabelKind::External => f.write_str(&self.0.name)?,
            LabelKind::Xi { anti, lin } => {
                f.write_str("xi(")?;
                write_list(f, anti)?;
                f.write_str(";")?;
                write_list(f, lin)?;
                f.write_str(")")?;
            }
        }
        if self.0.starred {
            f.write_str("*")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn write_list(f: &mut fmt::Formatter<'_>, labels: &[Label]) -> fmt::Result {
    for (i, l) in labels.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        fmt::Display::fmt(l, f)?;
    }
    Ok(())
}
