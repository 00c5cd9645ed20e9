//! Complex-coordinate analysis of jets in paired real variables.
//!
//! Real variables are taken in pairs `(x_1, y_1, …, x_n, y_n)`; the
//! corresponding complex layout is `(z_1, z̄_1, …, z_n, z̄_n)` with
//! `z_j = x_j + i y_j`. The change of coordinates is an exact invertible
//! linear substitution, so no information is lost either way.
//!
//! The antiholomorphic derivative here is `∂ᵶ_j := ∂_{x_j} + i ∂_{y_j}`,
//! without the conventional factor 1/2. Kernels are unaffected (a jet is
//! annihilated either way exactly when it is formally holomorphic); only
//! nonzero values change, e.g. applying it to `x - iy` gives 2.
//!
//! A jet is formally holomorphic when its complex form contains no barred
//! variable. Such jets are the exact obstruction class in this crate's
//! setting: a nonzero formally holomorphic jet can never be the jet of a
//! flat function, while its antiholomorphic image vanishes identically.

use crate::error::ComplexError;
use crate::jet::Jet;
use crate::multi_index::MultiIndex;
use crate::scalar::Scalar;

/// A jet over paired complex slots `(z_1, z̄_1, …)`; even slots are
/// unbarred, odd slots barred.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WirtingerJet {
    jet: Jet,
}

/// Classification of a solution jet presented to the flat ∂̄ problem.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolutionClass {
    /// Zero jet: the jet of a flat germ.
    Flat,
    /// Nonzero with no barred content: no flat function shares this jet,
    /// so the corresponding right-hand side admits no flat solution.
    FormallyHolomorphic,
    /// Barred content present, lowest barred total degree reported; such a
    /// jet cannot solve a problem with flat right-hand side at all.
    Mixed { order: usize },
}

impl WirtingerJet {
    pub fn jet(&self) -> &Jet {
        &self.jet
    }

    /// Number of complex variables.
    pub fn complex_dim(&self) -> usize {
        self.jet.dim() / 2
    }

    /// True when no stored monomial touches a barred slot.
    pub fn is_formally_holomorphic(&self) -> bool {
        self.first_barred().is_none()
    }

    /// Lowest-order monomial with barred content, if any.
    fn first_barred(&self) -> Option<&MultiIndex> {
        self.jet
            .terms()
            .map(|(index, _)| index)
            .find(|index| (0..self.complex_dim()).any(|j| index.exponent(2 * j + 1) > 0))
    }
}

/// A form `Σ φ_j dz̄_j` with components in real coordinates, closed at the
/// jet level.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZeroOneForm {
    components: Vec<Jet>,
}

impl ZeroOneForm {
    /// Validates the closedness identity: the `k`-th antiholomorphic
    /// derivative of component `j` equals the `j`-th of component `k`,
    /// through the shared reliable degree.
    pub fn new(components: Vec<Jet>) -> Result<Self, ComplexError> {
        assert!(!components.is_empty(), "forms need at least one component");
        let can_check = components
            .iter()
            .all(|component| component.trunc_degree() >= 1);
        if can_check {
            for j in 0..components.len() {
                for k in j + 1..components.len() {
                    let jk = antiholomorphic_derivative(&components[j], k)?;
                    let kj = antiholomorphic_derivative(&components[k], j)?;
                    if jk != kj {
                        return Err(ComplexError::NotClosed { j, k });
                    }
                }
            }
        }
        Ok(ZeroOneForm { components })
    }

    pub fn components(&self) -> &[Jet] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Jet::is_zero)
    }
}

fn check_even(dim: usize) -> Result<usize, ComplexError> {
    if dim % 2 != 0 {
        return Err(ComplexError::OddDimension { dim });
    }
    Ok(dim / 2)
}

/// `(∂_{x_j} + i ∂_{y_j}) f` for a jet in paired real variables.
fn antiholomorphic_derivative(f: &Jet, j: usize) -> Result<Jet, ComplexError> {
    let dim = f.dim();
    check_even(dim)?;
    let dx = f.derive(&MultiIndex::unit(dim, 2 * j))?;
    let dy = f.derive(&MultiIndex::unit(dim, 2 * j + 1))?;
    Ok(Jet::linear_combination(&[(Scalar::one(), &dx), (Scalar::i(), &dy)])
        .expect("matching dimensions"))
}

/// Exact passage to complex slots: `x_j = (z_j + z̄_j)/2`,
/// `y_j = (z_j - z̄_j)/(2i)`.
pub fn to_wirtinger(f: &Jet) -> Result<WirtingerJet, ComplexError> {
    let pairs = check_even(f.dim())?;
    let dim = f.dim();
    let half = Scalar::from_ratio(1, 2);
    let i_half = &half * &Scalar::i();
    let mut matrix = vec![vec![Scalar::zero(); dim]; dim];
    for j in 0..pairs {
        matrix[2 * j][2 * j] = half.clone();
        matrix[2 * j][2 * j + 1] = half.clone();
        matrix[2 * j + 1][2 * j] = -i_half.clone();
        matrix[2 * j + 1][2 * j + 1] = i_half.clone();
    }
    let jet = f.substitute_linear(&matrix)?;
    Ok(WirtingerJet { jet })
}

/// Inverse passage: `z_j = x_j + i y_j`, `z̄_j = x_j - i y_j`.
pub fn from_wirtinger(w: &WirtingerJet) -> Jet {
    let dim = w.jet.dim();
    let pairs = dim / 2;
    let mut matrix = vec![vec![Scalar::zero(); dim]; dim];
    for j in 0..pairs {
        matrix[2 * j][2 * j] = Scalar::one();
        matrix[2 * j][2 * j + 1] = Scalar::i();
        matrix[2 * j + 1][2 * j] = Scalar::one();
        matrix[2 * j + 1][2 * j + 1] = -Scalar::i();
    }
    w.jet
        .substitute_linear(&matrix)
        .expect("substitution matrix is invertible by construction")
}

/// The antiholomorphic differential of `f`: component `j` is
/// `(∂_{x_j} + i ∂_{y_j}) f`. The result is closed by the symmetry of mixed
/// partials; the constructor re-checks this.
pub fn dbar_apply(f: &Jet) -> Result<ZeroOneForm, ComplexError> {
    let pairs = check_even(f.dim())?;
    let components = (0..pairs)
        .map(|j| antiholomorphic_derivative(f, j))
        .collect::<Result<Vec<_>, _>>()?;
    ZeroOneForm::new(components)
}

/// Classifies a presented solution jet: zero, purely unbarred, or mixed
/// with the lowest barred degree.
pub fn classify(f: &Jet) -> Result<SolutionClass, ComplexError> {
    if f.is_zero() {
        check_even(f.dim())?;
        return Ok(SolutionClass::Flat);
    }
    let w = to_wirtinger(f)?;
    match w.first_barred() {
        None => Ok(SolutionClass::FormallyHolomorphic),
        Some(index) => Ok(SolutionClass::Mixed {
            order: index.degree(),
        }),
    }
}

/// Sums `copies` single-variable instances of a formally holomorphic jet,
/// one per complex slot: `F(z_1, …, z_n) = Σ_j g(z_j)`.
///
/// Every antiholomorphic component of the result is zero, and for `a >= 1`
/// the coefficient of `z_j^a` equals that of `z^a` in `g`; a constant term
/// would be added once per copy.
pub fn separable_sum(g: &WirtingerJet, copies: usize) -> Result<WirtingerJet, ComplexError> {
    assert!(copies >= 1, "need at least one copy");
    if g.complex_dim() != 1 {
        return Err(ComplexError::NotUnivariate {
            found: g.complex_dim(),
        });
    }
    if let Some(index) = g.first_barred() {
        return Err(ComplexError::NotFormallyHolomorphic {
            monomial: index.to_string(),
        });
    }
    let dim = 2 * copies;
    let trunc = g.jet.trunc_degree();
    let terms = g.jet.terms().flat_map(|(index, coeff)| {
        let power = index.exponent(0);
        (0..copies).map(move |j| {
            (
                MultiIndex::axis_power(dim, 2 * j, power),
                coeff.clone(),
            )
        })
    });
    let jet = Jet::from_terms(dim, trunc, terms).expect("degrees preserved by construction");
    let out = WirtingerJet { jet };
    debug_assert!(out.is_formally_holomorphic());
    debug_assert!(
        dbar_apply(&from_wirtinger(&out))
            .map(|form| form.is_zero())
            .unwrap_or(true),
        "separable sums must be annihilated by the antiholomorphic differential"
    );
    Ok(out)
}
