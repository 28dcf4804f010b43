//! Electronic configurations and spectroscopic term labels.
//!
//! Labels look like `1s2_1S`, `1s2s_3S`, `1s2.2s_2S` or `1s2.2s2_1S`: subshells
//! `n l [count]`, with a `.` needed after a count that is followed by another
//! subshell, then `_` (or a space) and the term `2S+1 L`.

use std::fmt;

use crate::angular::MAX_L;
use crate::eigen::Spin;
use crate::error::{Error, Result};

const L_LETTERS: [char; 7] = ['s', 'p', 'd', 'f', 'g', 'h', 'i'];

pub fn l_letter(l: usize) -> char {
    L_LETTERS[l]
}

/// `n l^count` in a configuration string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Subshell {
    pub n: usize,
    pub l: usize,
    pub count: usize,
}

impl Subshell {
    pub fn capacity(&self) -> usize {
        2 * (2 * self.l + 1)
    }

    pub fn is_closed(&self) -> bool {
        self.count == self.capacity()
    }
}

/// A parsed term label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub subshells: Vec<Subshell>,
    pub multiplicity: usize,
    pub total_l: usize,
}

impl Term {
    pub fn parse(label: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidConfiguration(format!("term '{label}': {msg}"));
        let label = label.trim();
        let (conf, term) = label
            .rsplit_once(['_', ' '])
            .ok_or_else(|| bad("expected '<configuration>_<2S+1><L>'"))?;
        let subshells = parse_configuration(conf).map_err(|m| bad(&m))?;

        let mut tc = term.chars();
        let digits: String = tc.by_ref().take_while(|c| c.is_ascii_digit()).collect();
        let rest: String = term[digits.len()..].to_string();
        let multiplicity: usize = digits.parse().map_err(|_| bad("missing multiplicity"))?;
        let mut rc = rest.chars();
        let letter = rc.next().ok_or_else(|| bad("missing L letter"))?;
        if rc.next().is_some() {
            return Err(bad("trailing characters after L"));
        }
        let total_l = L_LETTERS
            .iter()
            .position(|c| *c == letter.to_ascii_lowercase())
            .ok_or_else(|| bad("unknown L letter"))?;

        let t = Term { subshells, multiplicity, total_l };
        t.validate().map_err(|m| bad(&m))?;
        Ok(t)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.multiplicity == 0 {
            return Err("multiplicity must be positive".into());
        }
        for (i, a) in self.subshells.iter().enumerate() {
            if self.subshells[..i].iter().any(|b| b.n == a.n && b.l == a.l) {
                return Err(format!("subshell {}{} repeated", a.n, l_letter(a.l)));
            }
        }
        let unpaired = self.max_unpaired();
        let s2 = self.multiplicity - 1;
        if s2 > unpaired || (unpaired - s2) % 2 != 0 {
            return Err(format!("multiplicity {} impossible for this configuration", self.multiplicity));
        }
        let open: Vec<&Subshell> = self.open_shells().collect();
        if s2 < unpaired && !(open.len() == 2 && open.iter().all(|s| s.count == 1) && s2 == 0) {
            return Err("only high-spin terms and singlets of two singly occupied shells are supported".into());
        }
        // the two-open-s-shell and closed-shell cases fix L; otherwise L must be reachable
        let l_max: usize = open.iter().map(|s| s.l * s.count.min(s.capacity() - s.count)).sum();
        if self.total_l > l_max {
            return Err(format!("L = {} unreachable", self.total_l));
        }
        if open.len() == 2 && open.iter().all(|s| s.count == 1) && self.total_l < open[0].l.abs_diff(open[1].l) {
            return Err(format!("L = {} unreachable", self.total_l));
        }
        Ok(())
    }

    pub fn n_electrons(&self) -> usize {
        self.subshells.iter().map(|s| s.count).sum()
    }

    fn open_shells(&self) -> impl Iterator<Item = &Subshell> {
        self.subshells.iter().filter(|s| !s.is_closed())
    }

    /// Unpaired electrons in the high-spin arrangement.
    fn max_unpaired(&self) -> usize {
        self.open_shells()
            .map(|s| {
                let half = s.capacity() / 2;
                if s.count <= half { s.count } else { s.capacity() - s.count }
            })
            .sum()
    }

    /// True when the term is a single determinant (closed or high-spin).
    pub fn is_single_determinant(&self) -> bool {
        self.multiplicity - 1 == self.max_unpaired()
    }

    pub fn is_closed_shell(&self) -> bool {
        self.open_shells().next().is_none()
    }

    /// The configuration string without the term, e.g. `1s2s`.
    pub fn configuration_string(&self) -> String {
        let mut out = String::new();
        let mut prev_count = false;
        for s in &self.subshells {
            if prev_count {
                out.push('.');
            }
            out.push_str(&format!("{}{}", s.n, l_letter(s.l)));
            prev_count = s.count > 1;
            if prev_count {
                out.push_str(&s.count.to_string());
            }
        }
        out
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}{}", self.configuration_string(), self.multiplicity, L_LETTERS[self.total_l].to_ascii_uppercase())
    }
}

fn parse_configuration(s: &str) -> std::result::Result<Vec<Subshell>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    let read_num = |i: &mut usize| -> Option<usize> {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        chars[start..*i].iter().collect::<String>().parse().ok()
    };
    let mut pending_n: Option<usize> = None;
    while i < chars.len() || pending_n.is_some() {
        let n = match pending_n.take() {
            Some(n) => n,
            None => read_num(&mut i).ok_or("expected principal quantum number")?,
        };
        let letter = chars.get(i).ok_or("expected l letter")?;
        let l = L_LETTERS.iter().position(|c| c == letter).ok_or(format!("unknown l letter '{letter}'"))?;
        i += 1;
        if l > MAX_L.min(n.saturating_sub(1)) || n == 0 {
            return Err(format!("invalid subshell {n}{letter}"));
        }
        let mut count = 1;
        if let Some(num) = read_num(&mut i) {
            if i < chars.len() && chars[i].is_ascii_alphabetic() {
                pending_n = Some(num);
            } else {
                count = num;
            }
        }
        if i < chars.len() && chars[i] == '.' {
            i += 1;
            if i == chars.len() {
                return Err("trailing '.'".into());
            }
        }
        let sub = Subshell { n, l, count };
        if count == 0 || count > sub.capacity() {
            return Err(format!("{count} electrons do not fit in {n}{letter}"));
        }
        out.push(sub);
    }
    if out.is_empty() {
        return Err("empty configuration".into());
    }
    Ok(out)
}

/// Electrons of one spin in one `(n, l)` shell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellOccupation {
    pub n: usize,
    pub l: usize,
    pub spin: Spin,
    pub occupancy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeterminantRole {
    ClosedShell,
    HighSpin,
    /// The `M_S = 0` determinant of two singly occupied open shells.
    Ms0,
}

/// An occupied spin-orbital set with nuclear charge, used as SCF input.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub z: f64,
    pub shells: Vec<ShellOccupation>,
    pub term_label: String,
    pub role: DeterminantRole,
}

impl Configuration {
    /// The determinant of `term` that the SCF solves directly: the closed
    /// shell, or the high-spin (`M_S = S`) determinant.
    pub fn high_spin(z: f64, term: &Term) -> Result<Self> {
        let mut shells = Vec::new();
        for s in &term.subshells {
            let half = s.capacity() / 2;
            let up = s.count.min(half);
            let down = s.count - up;
            push_shell(&mut shells, s, Spin::Up, up as f64);
            push_shell(&mut shells, s, Spin::Down, down as f64);
        }
        let role = if term.is_closed_shell() { DeterminantRole::ClosedShell } else { DeterminantRole::HighSpin };
        Self::build(z, shells, term.to_string(), role)
    }

    /// The `M_S = 0` determinant of a two-open-shell configuration: the
    /// inner open electron up, the outer one down.
    pub fn ms0(z: f64, term: &Term) -> Result<Self> {
        let open: Vec<&Subshell> = term.subshells.iter().filter(|s| !s.is_closed()).collect();
        if open.len() != 2 || open.iter().any(|s| s.count != 1) {
            return Err(Error::SumRule(format!("{term} has no pair of singly occupied shells")));
        }
        let mut shells = Vec::new();
        for s in &term.subshells {
            if s.is_closed() {
                push_shell(&mut shells, s, Spin::Up, s.capacity() as f64 / 2.0);
                push_shell(&mut shells, s, Spin::Down, s.capacity() as f64 / 2.0);
            } else if std::ptr::eq(s, open[0]) {
                push_shell(&mut shells, s, Spin::Up, 1.0);
            } else {
                push_shell(&mut shells, s, Spin::Down, 1.0);
            }
        }
        Self::build(z, shells, term.to_string(), DeterminantRole::Ms0)
    }

    fn build(z: f64, shells: Vec<ShellOccupation>, term_label: String, role: DeterminantRole) -> Result<Self> {
        let c = Configuration { z, shells, term_label, role };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z > 0.0) {
            return Err(Error::InvalidConfiguration(format!("nuclear charge {} must be positive", self.z)));
        }
        for s in &self.shells {
            if s.l > MAX_L || s.n <= s.l {
                return Err(Error::InvalidConfiguration(format!("invalid shell n = {}, l = {}", s.n, s.l)));
            }
            if s.occupancy < 0.0 || s.occupancy > (2 * s.l + 1) as f64 + 1e-12 {
                return Err(Error::InvalidConfiguration(format!(
                    "{} electrons exceed the {} spin orbitals of {}{}",
                    s.occupancy,
                    2 * s.l + 1,
                    s.n,
                    l_letter(s.l)
                )));
            }
        }
        Ok(())
    }

    pub fn n_electrons(&self) -> f64 {
        self.shells.iter().map(|s| s.occupancy).sum()
    }

    /// Both spin channels carry identical shells.
    pub fn is_spin_symmetric(&self) -> bool {
        let side = |spin| {
            let mut v: Vec<(usize, usize, u64)> = self
                .shells
                .iter()
                .filter(|s| s.spin == spin)
                .map(|s| (s.n, s.l, s.occupancy.to_bits()))
                .collect();
            v.sort();
            v
        };
        side(Spin::Up) == side(Spin::Down)
    }
}

fn push_shell(out: &mut Vec<ShellOccupation>, s: &Subshell, spin: Spin, occupancy: f64) {
    if occupancy > 0.0 {
        out.push(ShellOccupation { n: s.n, l: s.l, spin, occupancy });
    }
}
