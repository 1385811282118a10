//! Group registry: the per-group data (Hauptmodul eta quotient, ODE
//! polynomials w and R, modular equation level n, CM point data) plus
//! tabulated expected values, with structural validation on load.

pub mod data;
pub mod file;
pub mod radical;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::modeq::ModularEquation;
use crate::numerics::quad::{is_squarefree, QuadExt};
use crate::qseries::{eta_quotient, EtaQuotientSpec, FractionalQSeries, Poly};
use radical::RadicalExpr;

/// CM point tau0 = (p + sqrt(d))/r together with the Atkin-Lehner-type
/// involution gamma fixing it (gamma tau0 = A tau0 for upper-triangular
/// A with alpha delta = n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CMData {
    pub tau0_p: i64,
    pub tau0_d: i64,
    pub tau0_r: i64,
    pub gamma: [[i64; 2]; 2],
    pub a_mat: [[i64; 2]; 2],
}

impl CMData {
    pub fn tau0(&self) -> Result<QuadExt> {
        let r = BigRational::from_integer(BigInt::from(self.tau0_r));
        let base = QuadExt::rational(BigRational::new(
            BigInt::from(self.tau0_p),
            BigInt::from(self.tau0_r),
        ));
        base.add(&QuadExt::surd(self.tau0_d)?.mul_rat(&r.recip()))
    }

    pub fn det_gamma(&self) -> i64 {
        self.gamma[0][0] * self.gamma[1][1] - self.gamma[0][1] * self.gamma[1][0]
    }

    /// M = gamma^{-1} A, the matrix carrying tau0 in the chain-rule
    /// factor of the constants B and C.
    pub fn m_matrix(&self) -> [[BigRational; 2]; 2] {
        let e = BigRational::from_integer(BigInt::from(self.det_gamma()));
        let [[a, b], [c, d]] = self.gamma.map(|r| r.map(BigInt::from));
        let [[al, be], [_, de]] = self.a_mat.map(|r| r.map(BigInt::from));
        let f = |v: BigInt| BigRational::from_integer(v) / &e;
        [
            [f(&d * &al), f(&d * &be - &b * &de)],
            [f(-&c * &al), f(-&c * &be + &a * &de)],
        ]
    }

    pub fn c_prime(&self) -> BigRational {
        self.m_matrix()[1][0].clone()
    }

    pub fn d_prime(&self) -> BigRational {
        self.m_matrix()[1][1].clone()
    }
}

/// Tabulated expected values used by verification; every field optional.
#[derive(Debug, Clone, Default)]
pub struct Expectations {
    pub x0: Option<RadicalExpr>,
    pub psi: Option<ModularEquation>,
    pub recurrence: Option<Vec<Poly>>,
    pub initials: Option<Vec<BigRational>>,
    pub b: Option<RadicalExpr>,
    pub c: Option<RadicalExpr>,
}

#[derive(Debug, Clone)]
pub struct GroupRecord {
    pub label: String,
    pub level: u32,
    pub eta: EtaQuotientSpec,
    pub w: Poly,
    pub r: Poly,
    pub meq_n: u32,
    pub cm: CMData,
    pub expect: Expectations,
}

impl GroupRecord {
    fn invariant(&self, field: &'static str, detail: String) -> Error {
        Error::RegistryInvariant {
            label: self.label.clone(),
            field,
            detail,
        }
    }

    /// Structural checks every record must pass before use.
    pub fn validate(&self) -> Result<()> {
        if self.eta.lead_24ths() != -24 {
            return Err(self.invariant(
                "eta",
                format!("leading exponent {}/24, want -24/24", self.eta.lead_24ths()),
            ));
        }
        if !self.w.coeff(0).is_one() {
            return Err(self.invariant("w", format!("w(0) = {}, want 1", self.w.coeff(0))));
        }
        if !self.r.coeff(0).is_zero() {
            return Err(self.invariant("R", format!("R(0) = {}, want 0", self.r.coeff(0))));
        }
        if self.meq_n != 2 && self.meq_n != 3 {
            return Err(self.invariant("modeq", format!("n = {}, want 2 or 3", self.meq_n)));
        }
        if (self.meq_n as i64).gcd(&(self.level as i64)) != 1 {
            return Err(self.invariant(
                "modeq",
                format!("n = {} shares a factor with level {}", self.meq_n, self.level),
            ));
        }
        if self.cm.tau0_d >= 0 || !is_squarefree(self.cm.tau0_d) {
            return Err(self.invariant(
                "cm",
                format!("d = {}, want negative squarefree", self.cm.tau0_d),
            ));
        }
        if self.cm.tau0_r <= 0 {
            return Err(self.invariant("cm", format!("r = {}, want positive", self.cm.tau0_r)));
        }
        let e = self.cm.det_gamma();
        let nl = self.level as i64;
        if e < 1 || nl % e != 0 || e.gcd(&(nl / e)) != 1 {
            return Err(self.invariant(
                "cm",
                format!("det(gamma) = {e} is not an exact divisor of the level {nl}"),
            ));
        }
        if self.cm.a_mat[1][0] != 0 {
            return Err(self.invariant("cm", "A is not upper triangular".into()));
        }
        let alde = self.cm.a_mat[0][0] * self.cm.a_mat[1][1];
        if alde != self.meq_n as i64 {
            return Err(self.invariant(
                "cm",
                format!("det(A) = {alde}, want n = {}", self.meq_n),
            ));
        }
        self.check_fixed_point()?;
        if self.cm.c_prime().is_zero() {
            return Err(self.invariant("cm", "bottom-left entry of gamma^-1 A vanishes".into()));
        }
        if let Some(psi) = &self.expect.psi {
            if psi.n != self.meq_n {
                return Err(self.invariant("expect.psi", "level mismatch".into()));
            }
            psi.validate_table_form()?;
        }
        if let Some(rec) = &self.expect.recurrence {
            if rec.first() != Some(&Poly::from_i64(&[0, 0, 0, 2])) {
                return Err(self.invariant("expect.recurrence", "P_0 != 2n^3".into()));
            }
        }
        if let Some(init) = &self.expect.initials {
            if init.first().map(One::is_one) != Some(true) {
                return Err(self.invariant("expect.initials", "A_0 != 1".into()));
            }
        }
        Ok(())
    }

    /// The exact fixed-point identity delta (a tau0 + b) =
    /// (alpha tau0 + beta)(c tau0 + d), cross-multiplied to avoid
    /// division, over Q(sqrt(d)).
    fn check_fixed_point(&self) -> Result<()> {
        let tau = self.cm.tau0()?;
        let [[a, b], [c, d]] = self.cm.gamma;
        let [[al, be], [_, de]] = self.cm.a_mat;
        let lin = |p: i64, q: i64| -> Result<QuadExt> {
            tau.mul_rat(&BigRational::from_integer(BigInt::from(p)))
                .add(&QuadExt::from_i64(q))
        };
        let lhs = lin(a, b)?.mul_rat(&BigRational::from_integer(BigInt::from(de)));
        let rhs = lin(al, be)?.mul(&lin(c, d)?)?;
        let diff = lhs.sub(&rhs)?;
        if !diff.is_zero() {
            return Err(Error::FixedPoint {
                label: self.label.clone(),
                detail: format!("delta(a tau + b) - (alpha tau + beta)(c tau + d) = {diff}"),
            });
        }
        Ok(())
    }

    /// The Hauptmodul t = 1/q + O(1) through `order` coefficients.
    pub fn t_series(&self, order: usize) -> Result<FractionalQSeries<BigRational>> {
        let t = eta_quotient(&self.eta, order + 2);
        if t.ram() != 1 || t.lead_num() != -1 || !t.coeff(-1, 1).is_one() {
            return Err(self.invariant(
                "eta",
                format!(
                    "Hauptmodul leads with {}*q^({}/{}), want q^-1",
                    crate::numerics::format_rational(&t.coeffs()[0]),
                    t.lead_num(),
                    t.ram()
                ),
            ));
        }
        Ok(t)
    }

    /// x = 1/t = q + O(q^2), the expansion variable of the whole
    /// pipeline, known past q^order.
    pub fn x_series(&self, order: usize) -> Result<FractionalQSeries<BigRational>> {
        let x = self.t_series(order)?.inv()?;
        Ok(x.truncate_to(order as i64 + 1))
    }
}

/// All builtin groups, in table order, validated.
pub fn load_builtin() -> Result<Vec<GroupRecord>> {
    data::BUILTIN_SOURCES
        .iter()
        .map(|&(label, src)| {
            let g = file::parse_group_file(src)?;
            if g.label != label {
                return Err(Error::RegistryInvariant {
                    label: label.to_string(),
                    field: "label",
                    detail: format!("embedded source declares {:?}", g.label),
                });
            }
            g.validate()?;
            Ok(g)
        })
        .collect()
}

/// A single builtin group by label.
pub fn find_builtin(label: &str) -> Result<GroupRecord> {
    let Some(&(_, src)) = data::BUILTIN_SOURCES.iter().find(|&&(l, _)| l == label) else {
        return Err(Error::UnknownGroup(label.to_string()));
    };
    let g = file::parse_group_file(src)?;
    g.validate()?;
    Ok(g)
}

/// Parse and validate a group file from disk.
pub fn load_file(path: &std::path::Path) -> Result<GroupRecord> {
    let src = std::fs::read_to_string(path)?;
    let g = file::parse_group_file(&src)?;
    g.validate()?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_labels_in_order() {
        let labels: Vec<&str> = data::BUILTIN_SOURCES.iter().map(|&(l, _)| l).collect();
        assert_eq!(
            labels,
            [
                "14+7", "14+14", "15+15", "16+", "20+20", "21+21", "22+11", "26+26", "35+35",
                "39+39"
            ]
        );
    }

    #[test]
    fn all_builtins_validate() {
        let gs = load_builtin().unwrap();
        assert_eq!(gs.len(), 10);
        for g in &gs {
            assert!(g.expect.psi.is_some(), "{}", g.label);
            assert!(g.expect.b.is_some(), "{}", g.label);
        }
    }

    #[test]
    fn unknown_label_rejected() {
        assert!(matches!(
            find_builtin("17+17"),
            Err(Error::UnknownGroup(_))
        ));
    }

    #[test]
    fn m_matrix_39() {
        let g = find_builtin("39+39").unwrap();
        // gamma = (0 -1; 39 0), A = (1 0; 0 2), det gamma = 39
        assert_eq!(g.cm.det_gamma(), 39);
        let m = g.cm.m_matrix();
        assert_eq!(m[1][0], BigRational::new(BigInt::from(-39), BigInt::from(39)));
        assert!(m[1][1].is_zero());
    }

    #[test]
    fn x_series_monic() {
        let g = find_builtin("16+").unwrap();
        let x = g.x_series(12).unwrap();
        assert_eq!(x.lead_num(), 1);
        assert!(x.coeff(1, 1).is_one());
    }
}
