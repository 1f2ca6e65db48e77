//! Model selection flags shared by the evaluation subcommands.
//!
//! Every model parameter is declared optional so that flag scope can be
//! policed: a flag given for a model it does not apply to is a usage error,
//! not silently ignored. Defaults are applied here, after the scope check.

use clap::{Args, ValueEnum};

use mmprop::{
    bc_ci_path_loss, ci_path_loss, fs_path_loss, modified_fs_path_loss, modified_sui_path_loss,
    sui_path_loss, BcCiModel, CiModel, CombiningScheme, FrequencyBand, ModifiedModel, SlopeBase,
    SuiContext, TerrainClass,
};

use crate::{usage, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    /// Friis free space
    Fs,
    /// SUI terrain model with frequency and RX-height corrections
    #[value(alias = "sui-nlos")]
    Sui,
    /// Close-in 1 m reference model
    Ci,
    /// Slope-corrected free space
    ModifiedFs,
    /// Slope-corrected SUI
    ModifiedSui,
    /// Beam-combining close-in model
    BcCi,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Fs => "fs",
            ModelKind::Sui => "sui",
            ModelKind::Ci => "ci",
            ModelKind::ModifiedFs => "modified-fs",
            ModelKind::ModifiedSui => "modified-sui",
            ModelKind::BcCi => "bc-ci",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TerrainArg {
    A,
    B,
    C,
}

impl TerrainArg {
    pub fn class(self) -> TerrainClass {
        match self {
            TerrainArg::A => TerrainClass::A,
            TerrainArg::B => TerrainClass::B,
            TerrainArg::C => TerrainClass::C,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    /// Coherent combining: amplitudes sum before squaring
    Cc,
    /// Non-coherent combining: powers sum
    Ncc,
}

impl SchemeArg {
    pub fn scheme(self) -> CombiningScheme {
        match self {
            SchemeArg::Cc => CombiningScheme::Coherent,
            SchemeArg::Ncc => CombiningScheme::NonCoherent,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeArg::Cc => "cc",
            SchemeArg::Ncc => "ncc",
        }
    }
}

/// Model choice plus every model parameter. Doc comments note which models
/// each flag applies to; [`ModelArgs::build`] enforces exactly that.
#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Propagation model
    #[arg(long, value_enum)]
    pub model: ModelKind,

    /// Path loss exponent (ci, bc-ci)
    #[arg(long)]
    pub ple: Option<f64>,

    /// Slope correction factor (modified-fs, modified-sui)
    #[arg(long)]
    pub alpha: Option<f64>,

    /// Terrain class, default a (sui, modified-sui)
    #[arg(long, value_enum)]
    pub terrain: Option<TerrainArg>,

    /// Transmitter height in meters, default 1.5 (sui, modified-sui)
    #[arg(long)]
    pub tx_height_m: Option<f64>,

    /// Receiver height in meters, default 1.5 (sui, modified-sui)
    #[arg(long)]
    pub rx_height_m: Option<f64>,

    /// Transmit antenna gain in dBi, default 0 (fs, modified-fs)
    #[arg(long)]
    pub tx_gain_dbi: Option<f64>,

    /// Receive antenna gain in dBi, default 0 (fs, modified-fs)
    #[arg(long)]
    pub rx_gain_dbi: Option<f64>,

    /// Beam-combining weight A (bc-ci)
    #[arg(long)]
    pub a_weight: Option<f64>,

    /// Combining scheme, default cc (bc-ci)
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,

    /// Number of combined beams (bc-ci)
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub beams: Option<u32>,
}

impl ModelArgs {
    /// Checks flag scope and builds the evaluator. All failures here are
    /// usage errors: they are knowable from the invocation alone.
    pub fn build(&self, band: FrequencyBand) -> Result<EvalModel, CliError> {
        self.check_flag_scope()?;
        match self.model {
            ModelKind::Fs => Ok(EvalModel::FreeSpace {
                band,
                tx_gain_dbi: self.tx_gain_dbi.unwrap_or(0.0),
                rx_gain_dbi: self.rx_gain_dbi.unwrap_or(0.0),
            }),
            ModelKind::Sui => Ok(EvalModel::Sui(self.sui_context(band)?)),
            ModelKind::Ci => {
                let ple = self.require(self.ple, "--ple")?;
                Ok(EvalModel::Ci(CiModel::new(band, ple, 0.0).map_err(usage)?))
            }
            ModelKind::ModifiedFs => {
                let alpha = self.require(self.alpha, "--alpha")?;
                let base = SlopeBase::FreeSpace {
                    band,
                    tx_gain_dbi: self.tx_gain_dbi.unwrap_or(0.0),
                    rx_gain_dbi: self.rx_gain_dbi.unwrap_or(0.0),
                };
                Ok(EvalModel::Modified(ModifiedModel::new(base, alpha, 0.0).map_err(usage)?))
            }
            ModelKind::ModifiedSui => {
                let alpha = self.require(self.alpha, "--alpha")?;
                let base = SlopeBase::Sui(self.sui_context(band)?);
                Ok(EvalModel::Modified(ModifiedModel::new(base, alpha, 0.0).map_err(usage)?))
            }
            ModelKind::BcCi => {
                let ple = self.require(self.ple, "--ple")?;
                let a_weight = self.require(self.a_weight, "--a-weight")?;
                let n_r = self.require(self.beams, "--beams")?;
                let scheme = self.scheme.unwrap_or(SchemeArg::Cc).scheme();
                let model = BcCiModel::new(band, ple, a_weight, scheme, 0.0).map_err(usage)?;
                Ok(EvalModel::BcCi { model, n_r })
            }
        }
    }

    fn require<T: Copy>(&self, flag: Option<T>, name: &str) -> Result<T, CliError> {
        flag.ok_or_else(|| {
            CliError::Usage(format!("--model {} requires {name}", self.model.name()))
        })
    }

    fn sui_context(&self, band: FrequencyBand) -> Result<SuiContext, CliError> {
        SuiContext::new(
            band,
            self.terrain.unwrap_or(TerrainArg::A).class(),
            self.tx_height_m.unwrap_or(1.5),
            self.rx_height_m.unwrap_or(1.5),
        )
        .map_err(usage)
    }

    fn check_flag_scope(&self) -> Result<(), CliError> {
        let m = self.model;
        let sui_based = matches!(m, ModelKind::Sui | ModelKind::ModifiedSui);
        let fs_based = matches!(m, ModelKind::Fs | ModelKind::ModifiedFs);
        let out_of_scope: [(bool, &str, &str); 10] = [
            (
                self.ple.is_some() && !matches!(m, ModelKind::Ci | ModelKind::BcCi),
                "--ple",
                "ci and bc-ci",
            ),
            (
                self.alpha.is_some() && !matches!(m, ModelKind::ModifiedFs | ModelKind::ModifiedSui),
                "--alpha",
                "modified-fs and modified-sui",
            ),
            (self.terrain.is_some() && !sui_based, "--terrain", "sui and modified-sui"),
            (self.tx_height_m.is_some() && !sui_based, "--tx-height-m", "sui and modified-sui"),
            (self.rx_height_m.is_some() && !sui_based, "--rx-height-m", "sui and modified-sui"),
            (self.tx_gain_dbi.is_some() && !fs_based, "--tx-gain-dbi", "fs and modified-fs"),
            (self.rx_gain_dbi.is_some() && !fs_based, "--rx-gain-dbi", "fs and modified-fs"),
            (self.a_weight.is_some() && m != ModelKind::BcCi, "--a-weight", "bc-ci"),
            (self.scheme.is_some() && m != ModelKind::BcCi, "--scheme", "bc-ci"),
            (self.beams.is_some() && m != ModelKind::BcCi, "--beams", "bc-ci"),
        ];
        for (bad, flag, allowed) in out_of_scope {
            if bad {
                return Err(CliError::Usage(format!(
                    "{flag} applies to {allowed}, not --model {}",
                    m.name()
                )));
            }
        }
        Ok(())
    }
}

/// A fully constructed model ready for distance evaluation. Evaluation is
/// the deterministic median curve; callers layer shadowing on top as a
/// separate series step so multi-distance draws follow one seeded stream.
pub enum EvalModel {
    FreeSpace { band: FrequencyBand, tx_gain_dbi: f64, rx_gain_dbi: f64 },
    Sui(SuiContext),
    Ci(CiModel),
    Modified(ModifiedModel),
    BcCi { model: BcCiModel, n_r: u32 },
}

impl EvalModel {
    pub fn loss_db(&self, d: f64) -> mmprop::Result<f64> {
        match self {
            EvalModel::FreeSpace { band, tx_gain_dbi, rx_gain_dbi } => {
                fs_path_loss(*band, d, *tx_gain_dbi, *rx_gain_dbi)
            }
            EvalModel::Sui(ctx) => sui_path_loss(ctx, d, None),
            EvalModel::Ci(model) => ci_path_loss(model, d, None),
            EvalModel::Modified(model) => match model.base() {
                SlopeBase::FreeSpace { .. } => modified_fs_path_loss(model, d),
                SlopeBase::Sui(_) => modified_sui_path_loss(model, d),
            },
            EvalModel::BcCi { model, n_r } => bc_ci_path_loss(model, *n_r, d, None),
        }
    }
}
