use std::sync::Arc;

use super::{BlockObjective, BlockPartition, Constants, Optimum, Regularizer};

type ValueFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type ArgminFn = Arc<dyn Fn(&[f64], usize, &BlockPartition) -> Vec<f64> + Send + Sync>;
type CurvatureFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Objective assembled from closures. Handy for small hand-written problems.
#[derive(Clone)]
pub struct FnObjective {
    partition: BlockPartition,
    value: ValueFn,
    gradient: GradFn,
    argmin: Option<ArgminFn>,
    curvature: Option<CurvatureFn>,
    regularizers: Vec<Regularizer>,
    constants: Constants,
    optimum: Option<Optimum>,
}

pub struct FnObjectiveBuilder {
    inner: FnObjective,
}

impl FnObjective {
    pub fn builder(partition: BlockPartition) -> FnObjectiveBuilder {
        let n = partition.n_blocks();
        FnObjectiveBuilder {
            inner: FnObjective {
                partition,
                value: Arc::new(|_| 0.0),
                gradient: Arc::new(|x| vec![0.0; x.len()]),
                argmin: None,
                curvature: None,
                regularizers: vec![Regularizer::Zero; n],
                constants: Constants::default(),
                optimum: None,
            },
        }
    }
}

impl FnObjectiveBuilder {
    pub fn value(mut self, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        self.inner.value = Arc::new(f);
        self
    }

    /// Full gradient; block gradients are gathered from it.
    pub fn gradient(mut self, f: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.inner.gradient = Arc::new(f);
        self
    }

    /// Exact block minimizer returning the new values of the block.
    pub fn block_argmin(
        mut self,
        f: impl Fn(&[f64], usize, &BlockPartition) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.inner.argmin = Some(Arc::new(f));
        self
    }

    /// `d ↦ dᵀ∇²f d` for quadratic `f`.
    pub fn quadratic_curvature(mut self, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        self.inner.curvature = Some(Arc::new(f));
        self
    }

    pub fn regularizers(mut self, regs: Vec<Regularizer>) -> Self {
        assert_eq!(regs.len(), self.inner.partition.n_blocks());
        self.inner.regularizers = regs;
        self
    }

    pub fn constants(mut self, c: Constants) -> Self {
        self.inner.constants = c;
        self
    }

    pub fn optimum(mut self, opt: Optimum) -> Self {
        self.inner.optimum = Some(opt);
        self
    }

    pub fn build(self) -> FnObjective {
        self.inner
    }
}

impl BlockObjective for FnObjective {
    fn partition(&self) -> &BlockPartition {
        &self.partition
    }

    fn smooth_value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    fn block_gradient(&self, x: &[f64], block: usize) -> Vec<f64> {
        self.partition.gather(&(self.gradient)(x), block)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (self.gradient)(x)
    }

    fn block_argmin(&self, x: &[f64], block: usize) -> Option<Vec<f64>> {
        self.argmin.as_ref().map(|f| f(x, block, &self.partition))
    }

    fn regularizer(&self, block: usize) -> &Regularizer {
        &self.regularizers[block]
    }

    fn constants(&self) -> &Constants {
        &self.constants
    }

    fn optimum(&self) -> Option<&Optimum> {
        self.optimum.as_ref()
    }

    fn quadratic_curvature(&self, d: &[f64]) -> Option<f64> {
        self.curvature.as_ref().map(|f| f(d))
    }
}
