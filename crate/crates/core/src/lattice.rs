//! Time-layered meshes and the three lattice update maps.
//!
//! A mesh is a stack of flat time layers, each holding the same number of
//! strictly increasing abscissas.  Three maps produce the next layer from
//! the current one:
//!
//! * evolutive: `xh = x (t + tau)/t`, the self-similar stretch that keeps
//!   uniform layers uniform and telescopes to `x_m = x_0 t_m / t_0`;
//! * orthogonal: `xh = x`, a static mesh;
//! * advected: `xh = x - tau u`, nodes riding the flow, which realises the
//!   constraint sigma = -tau u demanded by the advected scheme.

use crate::error::{Error, Result};

/// Fewest nodes a layer may hold: two boundary nodes per side plus at
/// least one interior node.
pub const MIN_LAYER_NODES: usize = 5;

/// A stack of flat time layers with one abscissa vector per layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    times: Vec<f64>,
    layers: Vec<Vec<f64>>,
}

impl Mesh {
    /// Starts a mesh from one validated layer.
    pub fn from_initial(t0: f64, xs: Vec<f64>) -> Result<Self> {
        validate_increasing(&xs)?;
        Ok(Mesh { times: vec![t0], layers: vec![xs] })
    }

    /// Appends a layer at a strictly later time with the same node count.
    pub fn push_layer(&mut self, t: f64, xs: Vec<f64>) -> Result<()> {
        let dt = t - *self.times.last().expect("mesh holds at least one layer");
        if !(dt > 0.0) {
            return Err(Error::NonPositiveTimeStep(dt));
        }
        if xs.len() != self.num_nodes() {
            return Err(Error::LengthMismatch { field: xs.len(), mesh: self.num_nodes() });
        }
        validate_increasing(&xs)?;
        self.times.push(t);
        self.layers.push(xs);
        Ok(())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn layer(&self, m: usize) -> &[f64] {
        &self.layers[m]
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.layers[0].len()
    }

    pub fn last_time(&self) -> f64 {
        *self.times.last().expect("mesh holds at least one layer")
    }

    pub fn last_layer(&self) -> &[f64] {
        self.layers.last().expect("mesh holds at least one layer")
    }
}

fn validate_increasing(xs: &[f64]) -> Result<()> {
    for i in 1..xs.len() {
        if xs[i] <= xs[i - 1] {
            return Err(Error::MeshTangled(i));
        }
    }
    Ok(())
}

/// Field values attached to one mesh layer, node for node.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldLayer {
    pub values: Vec<f64>,
}

impl FieldLayer {
    pub fn new(values: Vec<f64>) -> Self {
        FieldLayer { values }
    }

    /// Samples a function of x over the layer abscissas.
    pub fn sample(f: impl Fn(f64) -> f64, xs: &[f64]) -> Self {
        FieldLayer { values: xs.iter().map(|&x| f(x)).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Uniform layer `x_n = x0 + n h0` with `n` nodes.
pub fn build_layer(x0: f64, h0: f64, n: usize) -> Result<Vec<f64>> {
    if !(h0 > 0.0) {
        return Err(Error::NonPositiveSpacing(h0));
    }
    if n < MIN_LAYER_NODES {
        return Err(Error::TooFewPoints { min: MIN_LAYER_NODES, got: n });
    }
    Ok((0..n).map(|i| x0 + i as f64 * h0).collect())
}

/// Self-similar stretch `xh = x (t + tau)/t`.  Keeps uniform layers
/// uniform; refuses layers at t = 0 and steps that would reach or cross
/// the singular time.
pub fn advance_evolutive(xs: &[f64], t: f64, tau: f64) -> Result<Vec<f64>> {
    if !(tau > 0.0) {
        return Err(Error::NonPositiveTimeStep(tau));
    }
    if t == 0.0 || (t + tau) == 0.0 || (t + tau).signum() != t.signum() {
        return Err(Error::SingularTime);
    }
    let stretch = (t + tau) / t;
    Ok(xs.iter().map(|&x| x * stretch).collect())
}

/// Static mesh: the next layer reuses the current abscissas.
pub fn advance_orthogonal(xs: &[f64]) -> Vec<f64> {
    xs.to_vec()
}

/// Advected update `xh_n = x_n - tau u_n`.  Fails with
/// [`Error::MeshTangled`] when two nodes fold past each other.
pub fn advance_lagrangian(xs: &[f64], u: &FieldLayer, tau: f64) -> Result<Vec<f64>> {
    if !(tau > 0.0) {
        return Err(Error::NonPositiveTimeStep(tau));
    }
    if u.len() != xs.len() {
        return Err(Error::LengthMismatch { field: u.len(), mesh: xs.len() });
    }
    let out: Vec<f64> = xs.iter().zip(&u.values).map(|(&x, &v)| x - tau * v).collect();
    validate_increasing(&out)?;
    Ok(out)
}

/// Largest per-node drift rate |xh - x| / tau over all consecutive layer
/// pairs of the mesh; zero for a single layer.
pub fn sigma_over_tau_bound(mesh: &Mesh) -> f64 {
    let mut bound = 0.0f64;
    for m in 1..mesh.num_layers() {
        let tau = mesh.times()[m] - mesh.times()[m - 1];
        let prev = mesh.layer(m - 1);
        let next = mesh.layer(m);
        for (x, xh) in prev.iter().zip(next) {
            bound = bound.max((xh - x).abs() / tau);
        }
    }
    bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    #[test]
    fn layer_spans_the_requested_interval() {
        let xs = build_layer(-1.0, 0.1, 21).unwrap();
        assert_eq!(xs.len(), 21);
        assert_eq!(xs[0], -1.0);
        assert_relative_eq!(xs[20], 1.0, max_relative = 1e-14);
        assert_relative_eq!(xs[10], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn layer_rejects_bad_sizes() {
        assert_eq!(
            build_layer(0.0, -0.1, 21).unwrap_err(),
            Error::NonPositiveSpacing(-0.1)
        );
        assert_eq!(
            build_layer(0.0, 0.1, 4).unwrap_err(),
            Error::TooFewPoints { min: 5, got: 4 }
        );
    }

    #[test]
    fn evolutive_stretch_scales_by_the_time_ratio() {
        let xh = advance_evolutive(&[1.0, 2.0], 1.0, 0.1).unwrap();
        assert_relative_eq!(xh[0], 1.1, max_relative = 1e-15);
        assert_relative_eq!(xh[1], 2.2, max_relative = 1e-15);
    }

    #[test]
    fn evolutive_stretch_keeps_layers_uniform() {
        let xs = build_layer(-1.0, 0.1, 21).unwrap();
        let xh = advance_evolutive(&xs, 1.0, 0.1).unwrap();
        let h = xh[1] - xh[0];
        for w in xh.windows(2) {
            assert_relative_eq!(w[1] - w[0], h, max_relative = 1e-12);
        }
    }

    #[test]
    fn evolutive_stretch_telescopes() {
        // After m steps the map composes to x t_m / t_0 regardless of the
        // step sizes taken along the way.
        let mut xs = vec![1.0, 1.5];
        let mut t = 1.0;
        for _ in 0..100 {
            xs = advance_evolutive(&xs, t, 0.05).unwrap();
            t += 0.05;
        }
        assert_relative_eq!(xs[0], t / 1.0, max_relative = 1e-12);
        assert_relative_eq!(xs[1], 1.5 * t, max_relative = 1e-12);
    }

    #[test]
    fn evolutive_stretch_degenerates_to_identity() {
        let xh = advance_evolutive(&[-0.7, 0.4], 1.0, 1e-15).unwrap();
        assert_abs_diff_eq!(xh[0], -0.7, epsilon = 3e-15);
        assert_abs_diff_eq!(xh[1], 0.4, epsilon = 3e-15);
    }

    #[test]
    fn evolutive_stretch_guards_the_singular_time() {
        assert_eq!(advance_evolutive(&[1.0], 0.0, 0.1).unwrap_err(), Error::SingularTime);
        assert_eq!(
            advance_evolutive(&[1.0], -0.05, 0.1).unwrap_err(),
            Error::SingularTime
        );
        assert_eq!(
            advance_evolutive(&[1.0], -0.1, 0.1).unwrap_err(),
            Error::SingularTime
        );
        // Staying on the negative side is fine.
        assert!(advance_evolutive(&[1.0], -0.3, 0.1).is_ok());
    }

    #[test]
    fn orthogonal_is_the_identity() {
        let xs = vec![-1.0, 0.0, 2.5];
        assert_eq!(advance_orthogonal(&xs), xs);
    }

    #[test]
    fn advected_update_is_identity_on_zero_field() {
        let xs = build_layer(-1.0, 0.5, 5).unwrap();
        let u = FieldLayer::new(vec![0.0; 5]);
        assert_eq!(advance_lagrangian(&xs, &u, 0.2).unwrap(), xs);
    }

    #[test]
    fn advected_update_matches_the_stretch_on_the_ramp() {
        // u = -x/t makes -tau u = x tau / t, the evolutive displacement.
        let xs = build_layer(-1.0, 0.1, 21).unwrap();
        let u = FieldLayer::sample(|x| -x / 1.0, &xs);
        let advected = advance_lagrangian(&xs, &u, 0.1).unwrap();
        let stretched = advance_evolutive(&xs, 1.0, 0.1).unwrap();
        for (a, b) in advected.iter().zip(&stretched) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn advected_update_reports_folding() {
        let xs = vec![0.0, 1.0, 2.0, 3.0, 4.0];
        let u = FieldLayer::new(vec![0.0, 20.0, 0.0, 0.0, 0.0]);
        assert_eq!(
            advance_lagrangian(&xs, &u, 0.1).unwrap_err(),
            Error::MeshTangled(1)
        );
    }

    #[test]
    fn advected_update_checks_lengths() {
        let xs = vec![0.0, 1.0];
        let u = FieldLayer::new(vec![0.0; 3]);
        assert_eq!(
            advance_lagrangian(&xs, &u, 0.1).unwrap_err(),
            Error::LengthMismatch { field: 3, mesh: 2 }
        );
    }

    #[test]
    fn drift_bound_reads_the_mesh() {
        let xs = build_layer(-1.0, 0.1, 21).unwrap();
        let mut mesh = Mesh::from_initial(1.0, xs.clone()).unwrap();
        mesh.push_layer(1.1, advance_evolutive(&xs, 1.0, 0.1).unwrap()).unwrap();
        // sigma/tau = x/t peaks at the domain edge |x| = 1, t = 1.
        assert_relative_eq!(sigma_over_tau_bound(&mesh), 1.0, max_relative = 1e-12);

        let mut flat = Mesh::from_initial(1.0, xs.clone()).unwrap();
        flat.push_layer(1.1, advance_orthogonal(&xs)).unwrap();
        assert_eq!(sigma_over_tau_bound(&flat), 0.0);
    }

    #[test]
    fn mesh_validates_new_layers() {
        let xs = vec![0.0, 1.0, 2.0, 3.0, 4.0];
        let mut mesh = Mesh::from_initial(1.0, xs.clone()).unwrap();
        assert_eq!(
            mesh.push_layer(1.0, xs.clone()).unwrap_err(),
            Error::NonPositiveTimeStep(0.0)
        );
        assert_eq!(
            mesh.push_layer(1.1, vec![0.0, 1.0]).unwrap_err(),
            Error::LengthMismatch { field: 2, mesh: 5 }
        );
        assert_eq!(
            mesh.push_layer(1.1, vec![0.0, 2.0, 1.0, 3.0, 4.0]).unwrap_err(),
            Error::MeshTangled(2)
        );
        mesh.push_layer(1.1, xs).unwrap();
        assert_eq!(mesh.num_layers(), 2);
        assert_eq!(mesh.last_time(), 1.1);
    }

    #[test]
    fn initial_layer_must_increase() {
        assert_eq!(
            Mesh::from_initial(1.0, vec![0.0, 0.0]).unwrap_err(),
            Error::MeshTangled(1)
        );
    }

    proptest! {
        /// Boost equivariance of the advected update: shifting the layer by
        /// e t and the field by -e moves the image layer by e (t + tau).
        #[test]
        fn advected_update_is_boost_equivariant(
            e in -1.0..1.0f64,
            tau in 0.05..0.5f64,
            t in 0.5..2.0f64,
            us in prop::collection::vec(-0.5..0.5f64, 5),
        ) {
            let xs = build_layer(-1.0, 0.5, 5).unwrap();
            let u = FieldLayer::new(us);
            let plain = advance_lagrangian(&xs, &u, tau).unwrap();

            let boosted_xs: Vec<f64> = xs.iter().map(|&x| x + e * t).collect();
            let boosted_u = FieldLayer::new(u.values.iter().map(|v| v - e).collect());
            let boosted = advance_lagrangian(&boosted_xs, &boosted_u, tau).unwrap();

            let th = t + tau;
            for (a, b) in boosted.iter().zip(&plain) {
                prop_assert!((a - (b + e * th)).abs() <= 1e-12 * (1.0 + b.abs() + (e * th).abs()));
            }
        }

        /// The stretch factors through any split of the step.
        #[test]
        fn evolutive_stretch_composes(
            t in 0.5..2.0f64,
            a in 0.01..0.3f64,
            b in 0.01..0.3f64,
        ) {
            let xs = vec![-1.0, 0.5, 2.0];
            let two = advance_evolutive(&advance_evolutive(&xs, t, a).unwrap(), t + a, b).unwrap();
            let one = advance_evolutive(&xs, t, a + b).unwrap();
            for (p, q) in two.iter().zip(&one) {
                prop_assert!((p - q).abs() <= 1e-13 * (1.0 + q.abs()));
            }
        }
    }
}
