//! Parameter types, unit conventions and kinematic relations.
//!
//! The default scheme is natural units (hbar = c = 1, energies in units of the
//! rest energy when M = 1). Every formula in the library is written with the
//! explicit hbar and c of the `UnitSystem` carried by `Kinematics`, so SI
//! inputs give identical dimensionless results.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// CODATA exact and recommended constants used by the SI scheme.
pub mod si {
    pub const PLANCK: f64 = 6.626_070_15e-34;
    pub const HBAR: f64 = PLANCK / (2.0 * std::f64::consts::PI);
    pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
    pub const ELECTRON_MASS: f64 = 9.109_383_701_5e-31;
    pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitSystem {
    pub hbar: f64,
    pub c: f64,
}

impl UnitSystem {
    pub const NATURAL: UnitSystem = UnitSystem { hbar: 1.0, c: 1.0 };
    pub const SI: UnitSystem = UnitSystem {
        hbar: si::HBAR,
        c: si::SPEED_OF_LIGHT,
    };

    pub fn name(&self) -> &'static str {
        if *self == Self::NATURAL {
            "natural"
        } else if *self == Self::SI {
            "SI"
        } else {
            "custom"
        }
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::NATURAL
    }
}

/// Signed flux coupling alpha = qF/(2 pi hbar) with floor decomposition
/// alpha = int_part + frac, frac in [0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coupling {
    pub alpha: f64,
    pub int_part: i64,
    pub frac: f64,
}

impl Coupling {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha.abs() > 1e6 {
            return Err(Error::param("alpha", format!("must be finite and moderate, got {alpha}")));
        }
        let fl = alpha.floor();
        Ok(Coupling {
            alpha,
            int_part: fl as i64,
            frac: alpha - fl,
        })
    }

    /// Coupling of charge q to flux F in the given units.
    pub fn from_flux(units: UnitSystem, charge: f64, flux: f64) -> Result<Self> {
        Self::new(charge * flux / (2.0 * std::f64::consts::PI * units.hbar))
    }

    pub fn is_integer(&self) -> bool {
        self.frac == 0.0
    }
}

/// Energy, mass and wavenumbers of one electron state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Kinematics {
    pub units: UnitSystem,
    /// Total energy including rest energy.
    pub energy: f64,
    pub mass: f64,
    pub barrier_height: Option<f64>,
    /// Exterior wavenumber, k^2 = (E^2 - M^2c^4)/(hbar c)^2.
    pub k: f64,
    /// Barrier decay constant, kappa^2 = (M^2c^4 - (E-U)^2)/(hbar c)^2.
    pub kappa: Option<f64>,
    /// hbar k / (M c).
    pub relativistic_ratio: f64,
}

impl Kinematics {
    pub fn new(units: UnitSystem, energy: f64, mass: f64, barrier_height: Option<f64>) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::param("mass", format!("must be positive, got {mass}")));
        }
        if !energy.is_finite() {
            return Err(Error::param("energy", "must be finite"));
        }
        let mc2 = mass * units.c * units.c;
        if energy < mc2 {
            return Err(Error::param(
                "energy",
                format!("E = {energy} is below the rest energy {mc2}"),
            ));
        }
        let hc = units.hbar * units.c;
        let k = ((energy - mc2) * (energy + mc2)).sqrt() / hc;
        let kappa = match barrier_height {
            None => None,
            Some(u) => {
                if !u.is_finite() || !(energy - mc2 < u && u < energy + mc2) {
                    return Err(Error::NonEvanescentBarrier { u });
                }
                let d = energy - u;
                Some(((mc2 - d) * (mc2 + d)).sqrt() / hc)
            }
        };
        Ok(Kinematics {
            units,
            energy,
            mass,
            barrier_height,
            k,
            kappa,
            relativistic_ratio: units.hbar * k / (mass * units.c),
        })
    }

    /// State with a prescribed exterior wavenumber.
    pub fn from_wavenumber(units: UnitSystem, k: f64, mass: f64, barrier_height: Option<f64>) -> Result<Self> {
        if !(k >= 0.0) || !k.is_finite() {
            return Err(Error::param("k", format!("must be finite and >= 0, got {k}")));
        }
        let mc2 = mass * units.c * units.c;
        let hck = units.hbar * units.c * k;
        let energy = (hck * hck + mc2 * mc2).sqrt();
        let mut kin = Self::new(units, energy, mass, barrier_height)?;
        kin.k = k;
        kin.relativistic_ratio = units.hbar * k / (mass * units.c);
        Ok(kin)
    }

    pub fn rest_energy(&self) -> f64 {
        self.mass * self.units.c * self.units.c
    }

    pub fn hbar_c(&self) -> f64 {
        self.units.hbar * self.units.c
    }

    /// The same state with a different barrier (or none).
    pub fn with_barrier(&self, barrier_height: Option<f64>) -> Result<Self> {
        let mut kin = Self::new(self.units, self.energy, self.mass, barrier_height)?;
        kin.k = self.k;
        kin.relativistic_ratio = self.relativistic_ratio;
        Ok(kin)
    }

    pub fn kappa_or_err(&self) -> Result<f64> {
        self.kappa.ok_or_else(|| Error::param("U", "a barrier height is required"))
    }
}

/// Kinematics in natural units (hbar = c = 1).
pub fn make_kinematics(energy: f64, mass: f64, barrier_height: Option<f64>) -> Result<Kinematics> {
    Kinematics::new(UnitSystem::NATURAL, energy, mass, barrier_height)
}

/// Finite-radius flux tube of uniform interior field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TubeConfig {
    pub r0: f64,
    pub coupling: Coupling,
}

impl TubeConfig {
    pub fn new(r0: f64, coupling: Coupling) -> Result<Self> {
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(Error::param("r0", format!("must be positive, got {r0}")));
        }
        Ok(TubeConfig { r0, coupling })
    }

    /// Flux F for a particle of charge q.
    pub fn flux(&self, units: UnitSystem, charge: f64) -> f64 {
        2.0 * std::f64::consts::PI * units.hbar * self.coupling.alpha / charge
    }

    /// Interior field B = F / (pi r0^2).
    pub fn field(&self, units: UnitSystem, charge: f64) -> f64 {
        self.flux(units, charge) / (std::f64::consts::PI * self.r0 * self.r0)
    }

    /// qB/hbar = 2 alpha / r0^2.
    pub fn qb_over_hbar(&self) -> f64 {
        2.0 * self.coupling.alpha / (self.r0 * self.r0)
    }

    /// Squared interior wavenumbers (k1^2, k2^2) = k^2 -+ ... with U = 0.
    pub fn k_squared(&self, kin: &Kinematics) -> (f64, f64) {
        let b = self.qb_over_hbar();
        (kin.k * kin.k + b, kin.k * kin.k - b)
    }

    /// Squared barrier analogues (kappa1^2, kappa2^2) = -kappa^2 +- qB/hbar.
    pub fn kappa_squared(&self, kin: &Kinematics) -> Result<(f64, f64)> {
        let kappa = kin.kappa_or_err()?;
        let b = self.qb_over_hbar();
        Ok((-kappa * kappa + b, -kappa * kappa - b))
    }
}

/// Shielding barrier of height U for r < R0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarrierConfig {
    pub r_outer: f64,
    pub height: f64,
}

impl BarrierConfig {
    pub fn new(r_outer: f64, height: f64, tube: Option<&TubeConfig>) -> Result<Self> {
        if !(r_outer > 0.0) || !r_outer.is_finite() {
            return Err(Error::param("R0", format!("must be positive, got {r_outer}")));
        }
        if let Some(t) = tube {
            if r_outer <= t.r0 {
                return Err(Error::param("R0", format!("must exceed r0 = {}", t.r0)));
            }
        }
        if !height.is_finite() {
            return Err(Error::param("U", "must be finite"));
        }
        Ok(BarrierConfig { r_outer, height })
    }

    pub fn check_window(&self, kin: &Kinematics) -> Result<()> {
        let mc2 = kin.rest_energy();
        if !(kin.energy - mc2 < self.height && self.height < kin.energy + mc2) {
            return Err(Error::NonEvanescentBarrier { u: self.height });
        }
        Ok(())
    }
}

/// Incident spinor weights (a1, a2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorAmplitudes {
    pub a1: Complex64,
    pub a2: Complex64,
}

impl SpinorAmplitudes {
    pub fn new(a1: Complex64, a2: Complex64) -> Result<Self> {
        if a1.norm() == 0.0 && a2.norm() == 0.0 {
            return Err(Error::param("a1, a2", "spinor weights cannot both vanish"));
        }
        Ok(SpinorAmplitudes { a1, a2 })
    }
}

/// The SI scenario: a half flux quantum from a 2 T tube, a 1 keV electron and
/// a 1e-12 m shielding barrier of height Mc^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SiWorkedNumbers {
    /// h/2e in T m^2.
    pub flux_half_quantum: f64,
    pub field_tesla: f64,
    /// Radius of a 2 T tube carrying h/2e.
    pub r_half_quantum: f64,
    pub kinetic_energy_ev: f64,
    /// Non-relativistic wavenumber at 1 keV.
    pub k1_tilde: f64,
    pub k1_r_half_quantum: f64,
    /// hbar/(M c).
    pub compton_length: f64,
    pub r_outer: f64,
    pub k_r_outer: f64,
    pub mc_r_outer_over_hbar: f64,
    /// exp(-2 M c R0 / hbar).
    pub shielding_factor: f64,
    /// Kinetic energy (eV) for which k r_{h/2e} = 0.2.
    pub kinetic_energy_for_kr_0_2_ev: f64,
}

pub fn si_worked_numbers() -> SiWorkedNumbers {
    use si::*;
    let flux = PLANCK / (2.0 * ELEMENTARY_CHARGE);
    let field = 2.0;
    let r_half = (flux / (std::f64::consts::PI * field)).sqrt();
    let ekin_ev = 1.0e3;
    let ekin = ekin_ev * ELEMENTARY_CHARGE;
    let k1 = (2.0 * ELECTRON_MASS * ekin).sqrt() / HBAR;
    let compton = HBAR / (ELECTRON_MASS * SPEED_OF_LIGHT);
    let r_outer = 1.0e-12;
    let mcr = r_outer / compton;
    let k_low = 0.2 / r_half;
    let e_low = (HBAR * k_low).powi(2) / (2.0 * ELECTRON_MASS) / ELEMENTARY_CHARGE;
    SiWorkedNumbers {
        flux_half_quantum: flux,
        field_tesla: field,
        r_half_quantum: r_half,
        kinetic_energy_ev: ekin_ev,
        k1_tilde: k1,
        k1_r_half_quantum: k1 * r_half,
        compton_length: compton,
        r_outer,
        k_r_outer: k1 * r_outer,
        mc_r_outer_over_hbar: mcr,
        shielding_factor: (-2.0 * mcr).exp(),
        kinetic_energy_for_kr_0_2_ev: e_low,
    }
}
