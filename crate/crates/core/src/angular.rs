//! Clebsch-Gordan coefficients and the angular weights of the exchange field.

use std::sync::OnceLock;

/// Largest orbital angular momentum handled by [`CouplingTable`].
pub const MAX_L: usize = 6;

const LOG_FACT_LEN: usize = 61;

fn log_factorials() -> &'static [f64; LOG_FACT_LEN] {
    static TABLE: OnceLock<[f64; LOG_FACT_LEN]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0.0; LOG_FACT_LEN];
        for i in 1..LOG_FACT_LEN {
            t[i] = t[i - 1] + (i as f64).ln();
        }
        t
    })
}

fn log_fact(n: i32) -> f64 {
    log_factorials()[n as usize]
}

fn triangle(a: i32, b: i32, c: i32) -> bool {
    c >= (a - b).abs() && c <= a + b
}

/// `⟨l1 m1; l2 m2 | L M⟩` for integer angular momenta (Racah's closed form).
///
/// Returns exactly zero when a selection rule is violated.
pub fn clebsch_gordan(l1: i32, m1: i32, l2: i32, m2: i32, l: i32, m: i32) -> f64 {
    if l1 < 0 || l2 < 0 || l < 0 {
        return 0.0;
    }
    if m1 + m2 != m || m1.abs() > l1 || m2.abs() > l2 || m.abs() > l {
        return 0.0;
    }
    if !triangle(l1, l2, l) {
        return 0.0;
    }
    if m1 == 0 && m2 == 0 && (l1 + l2 + l) % 2 == 1 {
        return 0.0;
    }
    assert!(l1 + l2 + l + 1 < LOG_FACT_LEN as i32, "angular momenta too large for factorial table");

    let prefactor = 0.5
        * ((2 * l + 1) as f64).ln()
        + 0.5
            * (log_fact(l1 + l2 - l) + log_fact(l1 - l2 + l) + log_fact(-l1 + l2 + l)
                - log_fact(l1 + l2 + l + 1))
        + 0.5
            * (log_fact(l1 + m1)
                + log_fact(l1 - m1)
                + log_fact(l2 + m2)
                + log_fact(l2 - m2)
                + log_fact(l + m)
                + log_fact(l - m));

    let k_min = 0.max(l2 - l - m1).max(l1 - l + m2);
    let k_max = (l1 + l2 - l).min(l1 - m1).min(l2 + m2);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let denom = log_fact(k)
            + log_fact(l1 + l2 - l - k)
            + log_fact(l1 - m1 - k)
            + log_fact(l2 + m2 - k)
            + log_fact(l - l2 + m1 + k)
            + log_fact(l - l1 - m2 + k);
        let term = (prefactor - denom).exp();
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// Radial derivative `∂/∂r [r_<^k / r_>^{k+1}]` of the multipole kernel.
///
/// At `r == r'` the mean of the two one-sided limits is returned.
pub fn multipole_kernel_derivative(r: f64, r_prime: f64, k: u32) -> f64 {
    let kf = k as f64;
    let inner = || if k == 0 { 0.0 } else { kf * r.powi(k as i32 - 1) / r_prime.powi(k as i32 + 1) };
    let outer = || -(kf + 1.0) * r_prime.powi(k as i32) / r.powi(k as i32 + 2);
    if r < r_prime {
        inner()
    } else if r > r_prime {
        outer()
    } else {
        0.5 * (inner() + outer())
    }
}

/// Slater-Condon angular factor `c^k(l m, l' m')`.
pub fn gaunt_ck(k: i32, l: i32, m: i32, lp: i32, mp: i32) -> f64 {
    let scale = (((2 * lp + 1) as f64) / ((2 * l + 1) as f64)).sqrt();
    scale * clebsch_gordan(lp, 0, k, 0, l, 0) * clebsch_gordan(lp, mp, k, m - mp, l, m)
}

/// Weight of one `(l m, l' m')` orbital pair in multipole `L` of the
/// spherically averaged exchange field:
/// `(2l+1)/(2l'+1) · C²(l L l'; m, m'-m, m') · C²(l L l'; 000)`.
pub fn pair_weight(l: i32, m: i32, lp: i32, mp: i32, big_l: i32) -> f64 {
    let c_m = clebsch_gordan(l, m, big_l, mp - m, lp, mp);
    let c_0 = clebsch_gordan(l, 0, big_l, 0, lp, 0);
    ((2 * l + 1) as f64) / ((2 * lp + 1) as f64) * c_m * c_m * c_0 * c_0
}

/// Magnetic sums of [`pair_weight`], precomputed for `l, l' ≤ MAX_L`.
#[derive(Debug, Clone)]
pub struct CouplingTable {
    /// `Σ_{m,m'} pair_weight(l, m, l', m', L)`, indexed `[l][l'][L]`.
    full: Vec<Vec<Vec<f64>>>,
    /// `Σ_m pair_weight(l, m, l, m, L)`, indexed `[l][L]`.
    diagonal: Vec<Vec<f64>>,
}

impl Default for CouplingTable {
    fn default() -> Self {
        Self::new()
    }
}

impl CouplingTable {
    pub fn new() -> Self {
        let n = MAX_L + 1;
        let lmax = 2 * MAX_L + 1;
        let mut full = vec![vec![vec![0.0; lmax]; n]; n];
        let mut diagonal = vec![vec![0.0; lmax]; n];
        for l in 0..n as i32 {
            for lp in 0..n as i32 {
                for big_l in (l - lp).abs()..=(l + lp) {
                    if (l + lp + big_l) % 2 == 1 {
                        continue;
                    }
                    let mut s = 0.0;
                    for m in -l..=l {
                        for mp in -lp..=lp {
                            s += pair_weight(l, m, lp, mp, big_l);
                        }
                    }
                    full[l as usize][lp as usize][big_l as usize] = s;
                    if l == lp {
                        diagonal[l as usize][big_l as usize] =
                            (-l..=l).map(|m| pair_weight(l, m, l, m, big_l)).sum();
                    }
                }
            }
        }
        Self { full, diagonal }
    }

    /// Multipoles `L` allowed for the pair `(l, l')` (triangle and parity rules).
    pub fn multipoles(l: usize, lp: usize) -> impl Iterator<Item = usize> {
        let lo = l.abs_diff(lp);
        (lo..=l + lp).step_by(2)
    }

    pub fn full(&self, l: usize, lp: usize, big_l: usize) -> f64 {
        self.full[l][lp][big_l]
    }

    pub fn diagonal(&self, l: usize, big_l: usize) -> f64 {
        self.diagonal[l][big_l]
    }

    /// Exchange weight for two distinct shells with `n`, `n'` same-spin
    /// electrons, averaged over the ways of placing them among the `m` sublevels.
    pub fn shell_pair(&self, l: usize, n: f64, lp: usize, np: f64, big_l: usize) -> f64 {
        let f = n / (2 * l + 1) as f64;
        let fp = np / (2 * lp + 1) as f64;
        f * fp * self.full(l, lp, big_l)
    }

    /// Exchange weight of a shell with itself holding `n` same-spin electrons.
    pub fn shell_self(&self, l: usize, n: f64, big_l: usize) -> f64 {
        let dim = (2 * l + 1) as f64;
        let diag = self.diagonal(l, big_l);
        let off = self.full(l, l, big_l) - diag;
        let pair_prob = if l == 0 { 0.0 } else { n * (n - 1.0) / (dim * (dim - 1.0)) };
        n / dim * diag + pair_prob * off
    }

    /// Coefficient of `F^k(nl, nl)` in the non-spherical part of the direct
    /// Coulomb energy of a partially filled same-spin shell, averaged over
    /// sublevel placements.
    pub fn aspherical_direct(&self, l: usize, n: f64, k: usize) -> f64 {
        if k == 0 || l == 0 {
            return 0.0;
        }
        let dim = (2 * l + 1) as f64;
        n * (dim - n) / (dim * (dim - 1.0)) * self.diagonal(l, k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(clebsch_gordan(0, 0, 0, 0, 0, 0), 1.0);
        assert!((clebsch_gordan(1, 0, 1, 0, 0, 0) + 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert!((clebsch_gordan(1, 1, 1, -1, 2, 0) - 1.0 / 6f64.sqrt()).abs() < 1e-14);
        assert_eq!(clebsch_gordan(1, 0, 1, 0, 3, 0), 0.0);
        assert_eq!(clebsch_gordan(1, 1, 1, 1, 2, 1), 0.0);
    }

    #[test]
    fn orthogonality() {
        for l1 in 0..=4 {
            for l2 in 0..=4 {
                for big_l in (l1 as i32 - l2 as i32).abs()..=(l1 + l2) {
                    for lp in (l1 as i32 - l2 as i32).abs()..=(l1 + l2) {
                        for m in -big_l.min(lp)..=big_l.min(lp) {
                            let mut s = 0.0;
                            for m1 in -l1..=l1 {
                                let m2 = m - m1;
                                s += clebsch_gordan(l1, m1, l2, m2, big_l, m)
                                    * clebsch_gordan(l1, m1, l2, m2, lp, m);
                            }
                            let expect = if big_l == lp { 1.0 } else { 0.0 };
                            assert!((s - expect).abs() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn exchange_symmetry() {
        for l1 in 0..=4 {
            for l2 in 0..=4 {
                for big_l in (l1 - l2 as i32).abs()..=(l1 + l2) {
                    for m1 in -l1..=l1 {
                        for m2 in -l2..=l2 {
                            let a = clebsch_gordan(l1, m1, l2, m2, big_l, m1 + m2);
                            let b = clebsch_gordan(l2, m2, l1, m1, big_l, m1 + m2);
                            let sign = if (l1 + l2 - big_l) % 2 == 0 { 1.0 } else { -1.0 };
                            assert!((a - sign * b).abs() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parity_zeros() {
        for l in 0..=6 {
            for lpp in 0..=6 {
                for lp in 0..=6 {
                    if (l + lpp + lp) % 2 == 1 {
                        assert_eq!(clebsch_gordan(l, 0, lpp, 0, lp, 0), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_derivative() {
        assert_eq!(multipole_kernel_derivative(0.5, 1.0, 0), 0.0);
        assert!((multipole_kernel_derivative(2.0, 1.0, 0) + 0.25).abs() < 1e-15);
        assert!((multipole_kernel_derivative(1.0, 2.0, 1) - 0.25).abs() < 1e-15);
        assert!((multipole_kernel_derivative(1.0, 1.0, 0) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn closed_shell_sum_matches_reduced_form() {
        // Σ_{mm'} weight = (2l+1) C²(l L l'; 000) for a filled shell.
        let t = CouplingTable::new();
        for l in 0..=MAX_L {
            for lp in 0..=MAX_L {
                for big_l in CouplingTable::multipoles(l, lp) {
                    let c = clebsch_gordan(l as i32, 0, big_l as i32, 0, lp as i32, 0);
                    let expect = (2 * l + 1) as f64 * c * c;
                    assert!((t.full(l, lp, big_l) - expect).abs() < 1e-12);
                    assert!(t.full(l, lp, big_l) >= 0.0);
                }
            }
        }
    }

    #[test]
    fn weights_agree_with_slater_condon_factors() {
        for l in 0..=3 {
            for lp in 0..=3 {
                for k in CouplingTable::multipoles(l as usize, lp as usize) {
                    for m in -l..=l {
                        for mp in -lp..=lp {
                            let ck = gaunt_ck(k as i32, l, m, lp, mp);
                            assert!((pair_weight(lp, mp, l, m, k as i32) - ck * ck).abs() < 1e-13);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn single_p_electron_hole_weights() {
        let t = CouplingTable::new();
        // one p electron: monopole weight 1 (hole charge -1), quadrupole 2/25
        assert!((t.shell_self(1, 1.0, 0) - 1.0).abs() < 1e-14);
        assert!((t.shell_self(1, 1.0, 2) - 2.0 / 25.0).abs() < 1e-14);
        // full p shell reduces to the closed-shell weight
        assert!((t.shell_self(1, 3.0, 2) - t.full(1, 1, 2)).abs() < 1e-14);
        assert_eq!(t.aspherical_direct(1, 3.0, 2), 0.0);
        assert!((t.aspherical_direct(1, 1.0, 2) - 2.0 / 25.0).abs() < 1e-14);
    }
}
