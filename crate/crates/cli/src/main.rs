//! `phasevib` - structural vibration analysis from grayscale video.
//!
//! Subcommands cover the full workflow: synthesize validation scenes,
//! enhance contrast, estimate motion from phase, compute spectra, magnify
//! narrow-band motion, quantify deflection shapes, compare them with MAC,
//! and run the end-to-end baseline-vs-test damage report.
//!
//! Exit codes: 0 success / baseline-consistent, 1 error, 2 damage-indicated.

mod commands;
mod config;
mod pipeline;
mod plot;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "phasevib", version, about = "Video-based vibration analysis and damage detection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic ground-truth scene (frames + ground_truth.json).
    Synth(commands::SynthArgs),
    /// Stretch the pixel-intensity dynamic range of a frame directory.
    Enhance(commands::EnhanceArgs),
    /// Estimate per-point displacement from temporal phase differences.
    Estimate(commands::EstimateArgs),
    /// Magnitude spectrum of an estimated motion signal.
    Spectrum(commands::SpectrumArgs),
    /// Magnify motion in a temporal frequency band and rebuild the video.
    Magnify(commands::MagnifyArgs),
    /// Quantify the deflection shape of a magnified video by edge detection.
    Ods(commands::OdsArgs),
    /// Modal Assurance Criterion between two shape CSVs.
    Mac(commands::MacArgs),
    /// Full baseline-vs-test workflow ending in a damage verdict.
    Report(commands::ReportArgs),
}

fn main() {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Synth(args) => commands::cmd_synth(args).map(|()| 0),
        Command::Enhance(args) => commands::cmd_enhance(args).map(|()| 0),
        Command::Estimate(args) => commands::cmd_estimate(args).map(|()| 0),
        Command::Spectrum(args) => commands::cmd_spectrum(args).map(|()| 0),
        Command::Magnify(args) => commands::cmd_magnify(args).map(|()| 0),
        Command::Ods(args) => commands::cmd_ods(args).map(|()| 0),
        Command::Mac(args) => commands::cmd_mac(args).map(|()| 0),
        Command::Report(args) => commands::cmd_report(args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(1);
        }
    }
}
