use crate::error::{invalid, Result};
use crate::gaussian::NoiseChannel;

/// A two-mode coupling element: the first splits the source into signal and
/// reference, the second recombines them before detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupler {
    BeamSplitter { mu: f64 },
    Opa { r: f64 },
}

impl Coupler {
    pub fn is_pumped(&self) -> bool {
        matches!(self, Coupler::Opa { .. })
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Coupler::BeamSplitter { mu } if !(0.0..=1.0).contains(&mu) => {
                Err(invalid("mu", mu, "beam-splitter parameter must lie in [0, 1]"))
            }
            Coupler::Opa { r } if !(r >= 0.0 && r.is_finite()) => {
                Err(invalid("r", r, "amplifier gain must be finite and non-negative"))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Layout {
    /// Source straight through the process into one detector.
    Direct,
    /// Signal arm (mode 0) carries the process, reference arm (mode 1) the
    /// reference phase.
    Interferometer { splitter: Coupler, combiner: Coupler },
}

/// Imperfections of a scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// Loss and noise on both arms between preparation and detection.
    pub channel: Option<NoiseChannel>,
    /// Loss and noise inside the process, present only while the process is.
    pub process: Option<NoiseChannel>,
    /// Detector quantum efficiency; intensities are scaled by it.
    pub efficiency: f64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self::none()
    }
}

impl NoiseSpec {
    pub fn none() -> Self {
        Self {
            channel: None,
            process: None,
            efficiency: 1.0,
        }
    }

    pub fn with_channel(mut self, t: f64, v_eps: f64) -> Result<Self> {
        self.channel = Some(NoiseChannel::new(t, v_eps)?);
        Ok(self)
    }

    pub fn with_process(mut self, t: f64, v_eps: f64) -> Result<Self> {
        self.process = Some(NoiseChannel::new(t, v_eps)?);
        Ok(self)
    }

    pub fn with_efficiency(mut self, eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(invalid("eta", eta, "detector efficiency must lie in (0, 1]"));
        }
        self.efficiency = eta;
        Ok(self)
    }

    /// What a bypass round sees: the process and its noise are absent.
    pub fn without_process(mut self) -> Self {
        self.process = None;
        self
    }

    pub(crate) fn channel_or_ideal(&self) -> NoiseChannel {
        self.channel.unwrap_or_else(NoiseChannel::lossless)
    }

    pub(crate) fn process_or_ideal(&self) -> NoiseChannel {
        self.process.unwrap_or_else(NoiseChannel::lossless)
    }
}

/// Optical layout plus its imperfections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub layout: Layout,
    pub noise: NoiseSpec,
}

impl SchemeConfig {
    pub fn new(layout: Layout, noise: NoiseSpec) -> Result<Self> {
        if let Layout::Interferometer { splitter, combiner } = layout {
            splitter.validate()?;
            combiner.validate()?;
        }
        Ok(Self { layout, noise })
    }

    /// Beam splitter `μ` followed by a balanced beam splitter.
    pub fn passive(mu: f64) -> Result<Self> {
        Self::new(
            Layout::Interferometer {
                splitter: Coupler::BeamSplitter { mu },
                combiner: Coupler::BeamSplitter { mu: 0.5 },
            },
            NoiseSpec::none(),
        )
    }

    /// Two phase-locked amplifiers with gains `r1` and `r2`.
    pub fn active(r1: f64, r2: f64) -> Result<Self> {
        Self::new(
            Layout::Interferometer {
                splitter: Coupler::Opa { r: r1 },
                combiner: Coupler::Opa { r: r2 },
            },
            NoiseSpec::none(),
        )
    }

    pub fn direct() -> Self {
        Self {
            layout: Layout::Direct,
            noise: NoiseSpec::none(),
        }
    }

    pub fn with_noise(mut self, noise: NoiseSpec) -> Self {
        self.noise = noise;
        self
    }

    /// Whether any element depends on the random pump phase.
    pub fn is_pumped(&self) -> bool {
        match self.layout {
            Layout::Direct => false,
            Layout::Interferometer { splitter, combiner } => splitter.is_pumped() || combiner.is_pumped(),
        }
    }

    /// False for a beam splitter paired with an amplifier: the random pump
    /// phase washes the interference out.
    pub fn interference_expected(&self) -> bool {
        match self.layout {
            Layout::Direct => false,
            Layout::Interferometer { splitter, combiner } => splitter.is_pumped() == combiner.is_pumped(),
        }
    }

    pub fn modes(&self) -> usize {
        match self.layout {
            Layout::Direct => 1,
            Layout::Interferometer { .. } => 2,
        }
    }
}
