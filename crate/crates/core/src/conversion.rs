//! Turning the telecloning channel into a teleportation pair between the
//! port and copy 1.
//!
//! *Local* conversion rotates `(P, A)` with `R(q)`; *global* conversion
//! applies `T` on `(A, C1)` and then on `(P, C1)`. Outputs are written in the
//! register order `[P, C1, A, C2]`.

use std::fmt;

use crate::channel::{build_channel, DisentanglementParams};
use crate::efficiency::{moment_average, HAAR_MOMENTS};
use crate::entanglement::concurrence_param;
use crate::error::{Error, Result};
use crate::quantum::{PureState, QubitLabel, UnitaryMatrix, C64};

/// Register order of conversion outputs.
pub const OUTPUT_REGISTER: [QubitLabel; 4] = [QubitLabel::P, QubitLabel::C1, QubitLabel::A, QubitLabel::C2];

const CLONING_BOUND: f64 = 5.0 / 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConversionMode {
    Local,
    Global,
}

impl fmt::Display for ConversionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Local => "local",
            Self::Global => "global",
        })
    }
}

impl std::str::FromStr for ConversionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "local" => Ok(Self::Local),
            "global" => Ok(Self::Global),
            _ => Err(Error::InvalidParameter(format!("unknown conversion mode {s:?}"))),
        }
    }
}

/// Rotation in the `{|01⟩, |10⟩}` plane.
pub fn rotation_r(q: C64) -> UnitaryMatrix {
    let a = C64::new(1.0 / (1.0 + q.norm_sqr()).sqrt(), 0.0);
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    UnitaryMatrix::from_rows(4, &[o, z, z, z, z, a, -q * a, z, z, q.conj() * a, a, z, z, z, z, o])
        .expect("rotation is unitary")
}

/// Rotation in the `{|00⟩, |11⟩}` plane.
pub fn rotation_t(q: C64) -> UnitaryMatrix {
    let a = C64::new(1.0 / (1.0 + q.norm_sqr()).sqrt(), 0.0);
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    UnitaryMatrix::from_rows(4, &[a, z, z, q * a, z, o, z, z, z, z, o, z, -q.conj() * a, z, z, a])
        .expect("rotation is unitary")
}

/// Second global rotation angle, which leaves `(|00⟩ + n|11⟩)` on `(P, C1)`.
pub fn global_port_q(n_c1: f64) -> f64 {
    let s = (4.0 + n_c1 * n_c1).sqrt();
    n_c1 * (1.0 - s) / (n_c1 * n_c1 + s)
}

/// `R(q)` on `(P, A)`.
pub fn apply_local_rotation(channel: &PureState, q: C64) -> Result<PureState> {
    channel.apply_unitary(&rotation_r(q), &[QubitLabel::P, QubitLabel::A])
}

/// State after the first global rotation, `T(n_C1/2)` on `(A, C1)`.
pub fn global_intermediate(channel: &PureState, q_ancilla: f64) -> Result<PureState> {
    channel.apply_unitary(&rotation_t(C64::new(q_ancilla, 0.0)), &[QubitLabel::A, QubitLabel::C1])
}

/// Both global rotations with the given angles.
pub fn apply_global_rotations(channel: &PureState, q_ancilla: f64, q_port: f64) -> Result<PureState> {
    global_intermediate(channel, q_ancilla)?
        .apply_unitary(&rotation_t(C64::new(q_port, 0.0)), &[QubitLabel::P, QubitLabel::C1])
}

/// Exact Haar-averaged efficiencies of a converted channel at `m = 1`.
pub fn converted_efficiencies(state: &PureState) -> Result<[f64; 2]> {
    Ok(moment_average(state, C64::new(1.0, 0.0), &HAAR_MOMENTS)?.cpro)
}

/// Outcome of a conversion.
#[derive(Debug, Clone, PartialEq)]
pub struct ConversionResult {
    /// Converted channel over [`OUTPUT_REGISTER`].
    pub final_state: PureState,
    pub mode: ConversionMode,
    /// Efficiencies from running the protocol on `final_state`.
    pub cpro_1: f64,
    pub cpro_2: f64,
    /// The same efficiencies from closed forms.
    pub closed_form: [f64; 2],
    /// Largest `n_C2` for which copy 1 still reaches 5/6.
    pub threshold: f64,
    /// Parameter `g` of the pair `(|00⟩ + g|11⟩)` left on `(P, C1)`.
    pub gtp_parameter: f64,
}

impl ConversionResult {
    /// Largest deviation between simulated and closed-form efficiencies.
    pub fn closed_form_gap(&self) -> f64 {
        (self.cpro_1 - self.closed_form[0])
            .abs()
            .max((self.cpro_2 - self.closed_form[1]).abs())
    }
}

fn check_unit(name: &str, x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {x}")));
    }
    Ok(())
}

/// Efficiencies on the pair `(|00⟩ + g|11⟩)` with copy 2 left in `|0⟩`.
/// Copy 2 is only moved by the Pauli corrections, which correlate with the
/// input: `(2 + g²)/(3(1 + g²))`.
fn pair_efficiencies(g: f64) -> [f64; 2] {
    let g2 = g * g;
    [(2.0 + concurrence_param(g)) / 3.0, (2.0 + g2) / (3.0 * (1.0 + g2))]
}

fn finish(
    state: PureState,
    mode: ConversionMode,
    closed_form: [f64; 2],
    gtp_parameter: f64,
) -> Result<ConversionResult> {
    let final_state = state.reorder(&OUTPUT_REGISTER)?;
    let [cpro_1, cpro_2] = converted_efficiencies(&final_state)?;
    Ok(ConversionResult {
        final_state,
        mode,
        cpro_1,
        cpro_2,
        closed_form,
        threshold: transition_threshold(mode),
        gtp_parameter,
    })
}

/// Local conversion of the channel with `n_P = n_A = 1`, `n_C2 = 0`.
pub fn convert_local(n_c1: f64) -> Result<ConversionResult> {
    check_unit("n_C1", n_c1)?;
    let channel = build_channel(&DisentanglementParams::new(1.0, 1.0, n_c1, 0.0));
    let g = n_c1 / std::f64::consts::SQRT_2;
    finish(
        apply_local_rotation(&channel, C64::new(1.0, 0.0))?,
        ConversionMode::Local,
        pair_efficiencies(g),
        g,
    )
}

/// Global conversion of the channel with `n_P = n_A = 1`, `n_C2 = 0`.
pub fn convert_global(n_c1: f64) -> Result<ConversionResult> {
    check_unit("n_C1", n_c1)?;
    let channel = build_channel(&DisentanglementParams::new(1.0, 1.0, n_c1, 0.0));
    let state = apply_global_rotations(&channel, n_c1 / 2.0, global_port_q(n_c1))?;
    finish(state, ConversionMode::Global, pair_efficiencies(n_c1), n_c1)
}

/// Applies the rotations tuned for `n_C1 = 1, n_C2 = 0` to the channel with
/// `n_C1 = 1` and the given `n_C2`.
pub fn convert_borrowed(mode: ConversionMode, n_c2: f64) -> Result<ConversionResult> {
    check_unit("n_C2", n_c2)?;
    let channel = build_channel(&DisentanglementParams::new(1.0, 1.0, 1.0, n_c2));
    match mode {
        ConversionMode::Local => {
            let (c1, c2) = post_local_efficiencies(n_c2);
            let state = apply_local_rotation(&channel, C64::new(1.0, 0.0))?;
            finish(state, mode, [c1, c2], std::f64::consts::FRAC_1_SQRT_2)
        }
        ConversionMode::Global => {
            let (c1, c2) = post_global_efficiencies(n_c2);
            let state = apply_global_rotations(&channel, 0.5, global_port_q(1.0))?;
            finish(state, mode, [c1, c2], 1.0)
        }
    }
}

/// Copy efficiencies after the local conversion tuned for `n_C2 = 0`.
pub fn post_local_efficiencies(n_c2: f64) -> (f64, f64) {
    let (x, x2, s2) = (n_c2, n_c2 * n_c2, std::f64::consts::SQRT_2);
    let d = 9.0 * (1.0 + x2);
    ((6.0 + 2.0 * s2 + 5.0 * x2) / d, (5.0 + 2.0 * s2 * x + 6.0 * x2) / d)
}

/// Copy efficiencies after the global conversion tuned for `n_C2 = 0`.
pub fn post_global_efficiencies(n_c2: f64) -> (f64, f64) {
    let (x, x2) = (n_c2, n_c2 * n_c2);
    let c1 = (135.0 + 77.0 * x2) / (135.0 * (1.0 + x2));
    let c2 = (135.0 + (8.0 * 5f64.sqrt() + 159.0) * x2 + 24.0 * 15f64.sqrt() * x) / (270.0 * (1.0 + x2));
    (c1, c2)
}

/// `n_C2` at which copy 1 drops to 5/6.
pub fn transition_threshold(mode: ConversionMode) -> f64 {
    match mode {
        ConversionMode::Local => ((4.0 * 2f64.sqrt() - 3.0) / 5.0).sqrt(),
        ConversionMode::Global => (45.0f64 / 71.0).sqrt(),
    }
}

/// Bisection root of `cpro_1(n_C2) = 5/6` on `[0, 1]`.
pub fn threshold_by_bisection(mode: ConversionMode) -> f64 {
    let f = |x: f64| {
        let c1 = match mode {
            ConversionMode::Local => post_local_efficiencies(x).0,
            ConversionMode::Global => post_global_efficiencies(x).0,
        };
        c1 - CLONING_BOUND
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
