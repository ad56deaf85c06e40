//! Feed-forward Q-network with manual backpropagation.
//!
//! Hidden layers use ReLU, the output layer is linear. Weights are stored
//! row-major per layer with shape `(layer_sizes[l + 1], layer_sizes[l])`.
//! Training minimises the batch-mean pseudo-Huber loss of the selected
//! action's output with Adam.

mod checkpoint;

use rand::Rng as _;

use crate::{Error, Result, Rng};

pub use checkpoint::{load_checkpoint, read_checkpoint, save_checkpoint, write_checkpoint, MAGIC};

/// Default topology for the lander: 8 inputs, hidden layers of 200 and 60, 4 actions.
pub const DEFAULT_LAYER_SIZES: [usize; 4] = [8, 200, 60, 4];

/// Gradient-descent state for one array-of-layers layout.
#[derive(Debug, Clone, PartialEq)]
struct Layers {
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
}

impl Layers {
    fn zeros(layer_sizes: &[usize]) -> Self {
        let weights = layer_sizes
            .windows(2)
            .map(|w| vec![0.0; w[0] * w[1]])
            .collect();
        let biases = layer_sizes[1..].iter().map(|&n| vec![0.0; n]).collect();
        Self { weights, biases }
    }

    fn values(&self) -> impl Iterator<Item = &f64> {
        self.weights.iter().chain(self.biases.iter()).flatten()
    }

    fn values_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.weights
            .iter_mut()
            .chain(self.biases.iter_mut())
            .flatten()
    }

    fn congruent(&self, other: &Layers) -> bool {
        self.weights.len() == other.weights.len()
            && self
                .weights
                .iter()
                .zip(&other.weights)
                .all(|(a, b)| a.len() == b.len())
            && self
                .biases
                .iter()
                .zip(&other.biases)
                .all(|(a, b)| a.len() == b.len())
    }
}

/// Weights and biases of a fully connected ReLU network.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkParams {
    layer_sizes: Vec<usize>,
    layers: Layers,
}

/// Partial derivatives of a batch loss, shaped like the [`NetworkParams`] they differentiate.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    layers: Layers,
}

fn check_topology(layer_sizes: &[usize]) -> Result<()> {
    if layer_sizes.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "a network needs at least an input and an output layer, got {layer_sizes:?}"
        )));
    }
    if layer_sizes.contains(&0) {
        return Err(Error::InvalidParameter(format!(
            "layer sizes must be positive, got {layer_sizes:?}"
        )));
    }
    Ok(())
}

impl NetworkParams {
    /// All-zero network.
    pub fn zeros(layer_sizes: &[usize]) -> Result<Self> {
        check_topology(layer_sizes)?;
        Ok(Self {
            layer_sizes: layer_sizes.to_vec(),
            layers: Layers::zeros(layer_sizes),
        })
    }

    /// He-uniform weights (bound `sqrt(6 / fan_in)`) and zero biases.
    pub fn he_uniform(layer_sizes: &[usize], rng: &mut Rng) -> Result<Self> {
        let mut params = Self::zeros(layer_sizes)?;
        for (l, w) in params.layers.weights.iter_mut().enumerate() {
            let bound = (6.0 / layer_sizes[l] as f64).sqrt();
            for x in w.iter_mut() {
                *x = rng.random_range(-bound..=bound);
            }
        }
        Ok(params)
    }

    /// Assembles a network from explicit per-layer arrays, checking every shape.
    pub fn from_parts(
        layer_sizes: &[usize],
        weights: Vec<Vec<f64>>,
        biases: Vec<Vec<f64>>,
    ) -> Result<Self> {
        check_topology(layer_sizes)?;
        let layers = Layers { weights, biases };
        if !layers.congruent(&Layers::zeros(layer_sizes)) {
            return Err(Error::InvalidInput(format!(
                "weight/bias shapes do not match layer sizes {layer_sizes:?}"
            )));
        }
        if layers.values().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("network parameters"));
        }
        Ok(Self {
            layer_sizes: layer_sizes.to_vec(),
            layers,
        })
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn input_size(&self) -> usize {
        self.layer_sizes[0]
    }

    pub fn output_size(&self) -> usize {
        *self.layer_sizes.last().expect("topology checked")
    }

    /// Number of weight layers (one less than the number of layer sizes).
    pub fn depth(&self) -> usize {
        self.layers.weights.len()
    }

    pub fn param_count(&self) -> usize {
        self.layers.values().count()
    }

    /// Row-major weights of layer `l`, shape `(layer_sizes[l + 1], layer_sizes[l])`.
    pub fn weights(&self, l: usize) -> &[f64] {
        &self.layers.weights[l]
    }

    pub fn weights_mut(&mut self, l: usize) -> &mut [f64] {
        &mut self.layers.weights[l]
    }

    pub fn biases(&self, l: usize) -> &[f64] {
        &self.layers.biases[l]
    }

    pub fn biases_mut(&mut self, l: usize) -> &mut [f64] {
        &mut self.layers.biases[l]
    }

    /// Every parameter, weights of all layers first, then biases of all layers.
    pub fn values(&self) -> impl Iterator<Item = &f64> {
        self.layers.values()
    }

    pub fn values_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.layers.values_mut()
    }

    pub fn is_finite(&self) -> bool {
        self.values().all(|x| x.is_finite())
    }

    /// Deep copy. Equivalent to `Clone::clone`; named for the target-network sync.
    pub fn clone_params(&self) -> Self {
        self.clone()
    }

    /// Bitwise equality of every parameter, NaN-aware.
    pub fn bitwise_eq(&self, other: &Self) -> bool {
        self.layer_sizes == other.layer_sizes
            && self.param_count() == other.param_count()
            && self
                .values()
                .zip(other.values())
                .all(|(a, b)| a.to_bits() == b.to_bits())
    }

    /// Q-values for one observation.
    pub fn forward(&self, observation: &[f64]) -> Result<Vec<f64>> {
        self.check_observation(observation)?;
        let mut scratch = Activations::new(&self.layer_sizes);
        self.forward_into(observation, &mut scratch);
        Ok(scratch.output().to_vec())
    }

    /// Row-wise [`forward`](Self::forward) over a non-empty batch.
    pub fn forward_batch<S: AsRef<[f64]>>(&self, observations: &[S]) -> Result<Vec<Vec<f64>>> {
        if observations.is_empty() {
            return Err(Error::InvalidInput("empty batch".into()));
        }
        let mut scratch = Activations::new(&self.layer_sizes);
        observations
            .iter()
            .map(|obs| {
                let obs = obs.as_ref();
                self.check_observation(obs)?;
                self.forward_into(obs, &mut scratch);
                Ok(scratch.output().to_vec())
            })
            .collect()
    }

    fn check_observation(&self, observation: &[f64]) -> Result<()> {
        if observation.len() != self.input_size() {
            return Err(Error::InvalidInput(format!(
                "observation has {} components, network expects {}",
                observation.len(),
                self.input_size()
            )));
        }
        Ok(())
    }

    /// Fills `acts` with the activations of every layer for `input`.
    fn forward_into(&self, input: &[f64], acts: &mut Activations) {
        acts.layers[0].copy_from_slice(input);
        let depth = self.depth();
        for l in 0..depth {
            let (head, tail) = acts.layers.split_at_mut(l + 1);
            let x = &head[l];
            let y = &mut tail[0];
            let n_in = x.len();
            let w = &self.layers.weights[l];
            let b = &self.layers.biases[l];
            for (j, out) in y.iter_mut().enumerate() {
                let sum = b[j] + dot(&w[j * n_in..(j + 1) * n_in], x);
                *out = if l + 1 < depth { sum.max(0.0) } else { sum };
            }
        }
    }

    /// Gradients of the batch-mean pseudo-Huber loss on the selected actions.
    ///
    /// Only the output unit `actions[i]` receives loss signal for sample `i`.
    /// Returns the gradients and the mean loss.
    pub fn backward<S: AsRef<[f64]>>(
        &self,
        batch_obs: &[S],
        actions: &[usize],
        targets: &[f64],
        kappa: f64,
    ) -> Result<(Gradients, f64)> {
        let batch = batch_obs.len();
        if batch == 0 {
            return Err(Error::InvalidInput("empty batch".into()));
        }
        if actions.len() != batch || targets.len() != batch {
            return Err(Error::InvalidInput(format!(
                "batch of {batch} observations with {} actions and {} targets",
                actions.len(),
                targets.len()
            )));
        }
        check_kappa(kappa)?;
        if targets.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite("targets"));
        }
        if let Some(&a) = actions.iter().find(|&&a| a >= self.output_size()) {
            return Err(Error::InvalidInput(format!(
                "action {a} out of range for {} outputs",
                self.output_size()
            )));
        }

        let depth = self.depth();
        let inv_b = 1.0 / batch as f64;
        let mut grads = Gradients {
            layers: Layers::zeros(&self.layer_sizes),
        };
        let mut acts = Activations::new(&self.layer_sizes);
        let mut delta: Vec<Vec<f64>> = self.layer_sizes[1..]
            .iter()
            .map(|&n| vec![0.0; n])
            .collect();
        let mut loss_sum = 0.0;

        for ((obs, &action), &target) in batch_obs.iter().zip(actions).zip(targets) {
            let obs = obs.as_ref();
            self.check_observation(obs)?;
            self.forward_into(obs, &mut acts);

            let td = acts.output()[action] - target;
            loss_sum += huber(td, kappa);
            let out = &mut delta[depth - 1];
            out.iter_mut().for_each(|d| *d = 0.0);
            out[action] = huber_grad(td, kappa) * inv_b;

            for l in (0..depth).rev() {
                let x = &acts.layers[l];
                let n_in = x.len();
                let (lower, upper) = delta.split_at_mut(l);
                let d_out = &upper[0];
                let gw = &mut grads.layers.weights[l];
                let gb = &mut grads.layers.biases[l];
                for (j, &dj) in d_out.iter().enumerate() {
                    if dj == 0.0 {
                        continue;
                    }
                    gb[j] += dj;
                    let row = &mut gw[j * n_in..(j + 1) * n_in];
                    for (g, &xi) in row.iter_mut().zip(x.iter()) {
                        *g += dj * xi;
                    }
                }
                if l > 0 {
                    let w = &self.layers.weights[l];
                    let d_in = &mut lower[l - 1];
                    d_in.iter_mut().for_each(|d| *d = 0.0);
                    for (j, &dj) in d_out.iter().enumerate() {
                        if dj == 0.0 {
                            continue;
                        }
                        let row = &w[j * n_in..(j + 1) * n_in];
                        for (d, &wi) in d_in.iter_mut().zip(row.iter()) {
                            *d += dj * wi;
                        }
                    }
                    // ReLU mask from the post-activation value.
                    for (d, &xi) in d_in.iter_mut().zip(x.iter()) {
                        if xi <= 0.0 {
                            *d = 0.0;
                        }
                    }
                }
            }
        }

        Ok((grads, loss_sum * inv_b))
    }
}

/// Dot product over four interleaved partial sums.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let (a4, a_rest) = a.split_at(a.len() - a.len() % 4);
    let (b4, b_rest) = b.split_at(a4.len());
    for (ca, cb) in a4.chunks_exact(4).zip(b4.chunks_exact(4)) {
        for k in 0..4 {
            acc[k] += ca[k] * cb[k];
        }
    }
    let mut sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in a_rest.iter().zip(b_rest) {
        sum += x * y;
    }
    sum
}

/// Per-layer activation buffers reused across samples.
struct Activations {
    layers: Vec<Vec<f64>>,
}

impl Activations {
    fn new(layer_sizes: &[usize]) -> Self {
        Self {
            layers: layer_sizes.iter().map(|&n| vec![0.0; n]).collect(),
        }
    }

    fn output(&self) -> &[f64] {
        self.layers.last().expect("at least two layers")
    }
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "pseudo-Huber kappa must be positive, got {kappa}"
        )));
    }
    Ok(())
}

fn huber(td: f64, kappa: f64) -> f64 {
    let r = td / kappa;
    kappa * kappa * ((1.0 + r * r).sqrt() - 1.0)
}

fn huber_grad(td: f64, kappa: f64) -> f64 {
    let r = td / kappa;
    td / (1.0 + r * r).sqrt()
}

/// Pseudo-Huber loss `κ²(√(1 + (δ/κ)²) − 1)`.
pub fn huber_loss(td_error: f64, kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok(huber(td_error, kappa))
}

impl Gradients {
    /// Zero gradients shaped like `params`.
    pub fn zeros_like(params: &NetworkParams) -> Self {
        Self {
            layers: Layers::zeros(&params.layer_sizes),
        }
    }

    pub fn weights(&self, l: usize) -> &[f64] {
        &self.layers.weights[l]
    }

    pub fn weights_mut(&mut self, l: usize) -> &mut [f64] {
        &mut self.layers.weights[l]
    }

    pub fn biases(&self, l: usize) -> &[f64] {
        &self.layers.biases[l]
    }

    pub fn biases_mut(&mut self, l: usize) -> &mut [f64] {
        &mut self.layers.biases[l]
    }

    /// Same ordering as [`NetworkParams::values`].
    pub fn values(&self) -> impl Iterator<Item = &f64> {
        self.layers.values()
    }

    pub fn is_zero(&self) -> bool {
        self.values().all(|&g| g == 0.0)
    }
}

/// Adam optimizer state.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    m: Layers,
    v: Layers,
    step_count: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps_num: f64,
}

impl AdamState {
    /// Fresh state with β1 = 0.9, β2 = 0.999, ε = 1e-8.
    pub fn new(params: &NetworkParams) -> Self {
        Self::with_hyperparams(params, 0.9, 0.999, 1e-8)
    }

    pub fn with_hyperparams(params: &NetworkParams, beta1: f64, beta2: f64, eps_num: f64) -> Self {
        Self {
            m: Layers::zeros(&params.layer_sizes),
            v: Layers::zeros(&params.layer_sizes),
            step_count: 0,
            beta1,
            beta2,
            eps_num,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step_count
    }

    /// First-moment accumulator, ordered like [`NetworkParams::values`].
    pub fn first_moment(&self) -> impl Iterator<Item = &f64> {
        self.m.values()
    }

    pub fn second_moment(&self) -> impl Iterator<Item = &f64> {
        self.v.values()
    }
}

/// One bias-corrected Adam update of `params` in place.
///
/// Non-finite gradients are refused before anything is modified.
pub fn adam_step(
    params: &mut NetworkParams,
    grads: &Gradients,
    state: &mut AdamState,
    lr: f64,
) -> Result<()> {
    if !(lr > 0.0 && lr.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "learning rate must be positive, got {lr}"
        )));
    }
    if !params.layers.congruent(&grads.layers) || !params.layers.congruent(&state.m) {
        return Err(Error::InvalidInput(
            "gradient or optimizer state shape does not match parameters".into(),
        ));
    }
    if grads.values().any(|g| !g.is_finite()) {
        return Err(Error::NonFinite("gradients"));
    }

    state.step_count += 1;
    let t = state.step_count as f64;
    let (b1, b2, eps) = (state.beta1, state.beta2, state.eps_num);
    let c1 = 1.0 - b1.powf(t);
    let c2 = 1.0 - b2.powf(t);

    let theta = params.layers.values_mut();
    let m = state.m.values_mut();
    let v = state.v.values_mut();
    for (((p, &g), m), v) in theta.zip(grads.values()).zip(m).zip(v) {
        *m = b1 * *m + (1.0 - b1) * g;
        *v = b2 * *v + (1.0 - b2) * g * g;
        let m_hat = *m / c1;
        let v_hat = *v / c2;
        *p -= lr * m_hat / (v_hat.sqrt() + eps);
    }
    if !params.is_finite() {
        return Err(Error::NonFinite("parameters after Adam step"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;

    fn random_obs(n: usize, rng: &mut Rng) -> Vec<f64> {
        (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    /// Straight-line reference: no shared buffers, explicit indices.
    fn naive_forward(p: &NetworkParams, x: &[f64]) -> Vec<f64> {
        let sizes = p.layer_sizes();
        let mut a = x.to_vec();
        for l in 0..sizes.len() - 1 {
            let mut next = vec![0.0; sizes[l + 1]];
            for j in 0..sizes[l + 1] {
                let mut s = p.biases(l)[j];
                for i in 0..sizes[l] {
                    s += p.weights(l)[j * sizes[l] + i] * a[i];
                }
                next[j] = if l + 2 < sizes.len() { s.max(0.0) } else { s };
            }
            a = next;
        }
        a
    }

    #[test]
    fn zero_network_outputs_zero() {
        let p = NetworkParams::zeros(&DEFAULT_LAYER_SIZES).unwrap();
        let out = p
            .forward(&[0.3, -1.0, 2.0, 0.0, 0.5, 0.1, 1.0, 0.0])
            .unwrap();
        assert_eq!(out, vec![0.0; 4]);
    }

    #[test]
    fn relu_clamps_negative_hidden_unit() {
        let p = NetworkParams::from_parts(
            &[1, 1, 1],
            vec![vec![1.0], vec![1.0]],
            vec![vec![-1.0], vec![0.0]],
        )
        .unwrap();
        assert_eq!(p.forward(&[0.5]).unwrap(), vec![0.0]);
    }

    #[test]
    fn forward_matches_naive_loops() {
        let mut rng = seeded_rng(11);
        let p = NetworkParams::he_uniform(&DEFAULT_LAYER_SIZES, &mut rng).unwrap();
        for _ in 0..5 {
            let x = random_obs(8, &mut rng);
            let fast = p.forward(&x).unwrap();
            let slow = naive_forward(&p, &x);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn forward_rejects_wrong_dimension() {
        let p = NetworkParams::zeros(&DEFAULT_LAYER_SIZES).unwrap();
        assert!(matches!(p.forward(&[1.0; 7]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn forward_batch_rowwise_exact() {
        let mut rng = seeded_rng(3);
        let p = NetworkParams::he_uniform(&DEFAULT_LAYER_SIZES, &mut rng).unwrap();
        let mut rows: Vec<Vec<f64>> = (0..32).map(|_| random_obs(8, &mut rng)).collect();
        rows.push(rows[4].clone());
        let out = p.forward_batch(&rows).unwrap();
        for (row, q) in rows.iter().zip(&out) {
            assert_eq!(&p.forward(row).unwrap(), q);
        }
        assert_eq!(out[4], out[32]);
        assert_eq!(
            p.forward_batch(&rows[..1]).unwrap()[0],
            p.forward(&rows[0]).unwrap()
        );
        let empty: Vec<Vec<f64>> = Vec::new();
        assert!(matches!(
            p.forward_batch(&empty),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn huber_values() {
        assert_eq!(huber_loss(0.0, 1.0).unwrap(), 0.0);
        assert!((huber_loss(1.0, 1.0).unwrap() - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        for d in [0.1, 1.5, 7.0, 300.0] {
            assert_eq!(huber_loss(d, 2.0).unwrap(), huber_loss(-d, 2.0).unwrap());
        }
        // Quadratic near zero, linear in the tails.
        assert!((huber_loss(1e-4, 1.0).unwrap() - 0.5e-8).abs() < 1e-16);
        assert!((huber_loss(1e6, 1.0).unwrap() / 1e6 - 1.0).abs() < 1e-5);
        assert!(matches!(
            huber_loss(1.0, 0.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            huber_loss(1.0, -1.0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn backward_zero_at_targets() {
        let mut rng = seeded_rng(5);
        let p = NetworkParams::he_uniform(&[4, 6, 3], &mut rng).unwrap();
        let obs: Vec<Vec<f64>> = (0..5).map(|_| random_obs(4, &mut rng)).collect();
        let actions = [0, 1, 2, 1, 0];
        let targets: Vec<f64> = obs
            .iter()
            .zip(actions)
            .map(|(o, a)| p.forward(o).unwrap()[a])
            .collect();
        let (g, loss) = p.backward(&obs, &actions, &targets, 1.0).unwrap();
        assert_eq!(loss, 0.0);
        assert!(g.is_zero());
    }

    #[test]
    fn backward_duplicate_samples_match_single() {
        let mut rng = seeded_rng(8);
        let p = NetworkParams::he_uniform(&[3, 5, 2], &mut rng).unwrap();
        let o = random_obs(3, &mut rng);
        let (g1, l1) = p
            .backward(std::slice::from_ref(&o), &[1], &[0.7], 1.0)
            .unwrap();
        let (g2, l2) = p
            .backward(&[o.clone(), o], &[1, 1], &[0.7, 0.7], 1.0)
            .unwrap();
        assert!((l1 - l2).abs() < 1e-15);
        for (a, b) in g1.values().zip(g2.values()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn backward_rejects_bad_inputs() {
        let p = NetworkParams::zeros(&[2, 3, 2]).unwrap();
        let obs = vec![vec![0.0, 1.0]];
        assert!(matches!(
            p.backward(&obs, &[0], &[f64::NAN], 1.0),
            Err(Error::NonFinite(_))
        ));
        assert!(matches!(
            p.backward(&obs, &[2], &[0.0], 1.0),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            p.backward(&obs, &[0, 1], &[0.0], 1.0),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            p.backward(&obs, &[0], &[0.0], 0.0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn adam_zero_gradient_keeps_params() {
        let mut rng = seeded_rng(1);
        let mut p = NetworkParams::he_uniform(&[3, 4, 2], &mut rng).unwrap();
        let before = p.clone();
        let mut st = AdamState::new(&p);
        let g = Gradients::zeros_like(&p);
        for _ in 0..3 {
            adam_step(&mut p, &g, &mut st, 0.01).unwrap();
        }
        assert!(p.bitwise_eq(&before));
        assert_eq!(st.step_count(), 3);
    }

    #[test]
    fn adam_refuses_non_finite_gradients() {
        let mut p = NetworkParams::zeros(&[1, 1]).unwrap();
        let mut st = AdamState::new(&p);
        let mut g = Gradients::zeros_like(&p);
        g.weights_mut(0)[0] = f64::INFINITY;
        let before = p.clone();
        assert!(matches!(
            adam_step(&mut p, &g, &mut st, 0.01),
            Err(Error::NonFinite(_))
        ));
        assert!(p.bitwise_eq(&before));
        assert_eq!(st.step_count(), 0);
        let zero = Gradients::zeros_like(&p);
        assert!(adam_step(&mut p, &zero, &mut st, 0.0).is_err());
    }

    #[test]
    fn clone_is_independent() {
        let mut rng = seeded_rng(2);
        let p = NetworkParams::he_uniform(&[3, 4, 2], &mut rng).unwrap();
        let snapshot = p.clone();
        let mut c = p.clone_params();
        c.weights_mut(0)[0] += 1.0;
        assert!(p.bitwise_eq(&snapshot));
        assert!(p.clone_params().clone_params().bitwise_eq(&p));
        let x = [0.1, 0.2, 0.3];
        assert_eq!(
            p.clone_params().forward(&x).unwrap(),
            p.forward(&x).unwrap()
        );
    }

    #[test]
    fn he_uniform_bounds_and_zero_biases() {
        let mut rng = seeded_rng(4);
        let p = NetworkParams::he_uniform(&DEFAULT_LAYER_SIZES, &mut rng).unwrap();
        for l in 0..p.depth() {
            let bound = (6.0 / p.layer_sizes()[l] as f64).sqrt();
            assert!(p.weights(l).iter().all(|w| w.abs() <= bound));
            assert!(p.biases(l).iter().all(|&b| b == 0.0));
        }
        assert!(NetworkParams::zeros(&[3]).is_err());
        assert!(NetworkParams::zeros(&[3, 0, 1]).is_err());
    }
}
