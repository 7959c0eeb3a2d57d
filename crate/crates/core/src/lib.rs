//! Adaptive decomposition of real signals into band-limited modes.
//!
//! Three methods share one spectral toolbox:
//!
//! * the empirical Fourier decomposition ([`efd`]), which segments the
//!   spectrum around its dominant peaks and cuts it with ideal masks;
//! * the empirical wavelet transform ([`ewt`]), which uses smooth Meyer-type
//!   filters over a segmentation;
//! * the Fourier decomposition method ([`fdm`]), which grows bands of Fourier
//!   coefficients while the band's analytic phase keeps increasing.
//!
//! [`tfr`] turns modes into instantaneous amplitude and frequency tracks and
//! [`benchkit`] holds the synthetic test signals and comparison metrics.
//!
//! ```
//! use efdkit::{efd_decompose, Signal};
//!
//! let x = Signal::from_fn(1000, 1000.0, |t| {
//!     (2.0 * std::f64::consts::PI * 5.0 * t).cos() + 0.5 * (2.0 * std::f64::consts::PI * 80.0 * t).cos()
//! })?;
//! let modes = efd_decompose(&x, 2)?;
//! assert_eq!(modes.len(), 2);
//! # Ok::<(), efdkit::Error>(())
//! ```

pub mod benchkit;
pub mod efd;
pub mod error;
pub mod ewt;
pub mod export;
pub mod fdm;
pub mod modes;
pub mod segmentation;
pub mod signal;
pub mod spectral;
pub mod tfr;

pub use efd::{build_ideal_bank, efd_decompose, efd_decompose_with, EfdOptions, IdealFilterBank};
pub use error::{Error, Result};
pub use ewt::{beta, build_filter_bank, compute_gamma, ewt_decompose, EwtFilterBank};
pub use fdm::{band_analytic, fdm_htl, fdm_lth, fourier_coefficients, FibfSet};
pub use modes::{Method, ModeSet};
pub use segmentation::{
    segment_improved, segment_local_maxima, segment_lowest_minima, MagnitudeProfile, Segmentation, Technique,
};
pub use signal::Signal;
pub use spectral::{analytic_signal, forward_spectrum, inverse_spectrum, AnalyticSignal, Boundary, Spectrum};
pub use tfr::{mode_tfr, raster_tfr, TfrRaster, TfrTrack};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/getting-started.md")]
    mod getting_started {}
    #[doc = include_str!("../../../book/src/spectrum.md")]
    mod spectrum {}
    #[doc = include_str!("../../../book/src/segmentation.md")]
    mod segmentation {}
    #[doc = include_str!("../../../book/src/efd.md")]
    mod efd {}
    #[doc = include_str!("../../../book/src/ewt.md")]
    mod ewt {}
    #[doc = include_str!("../../../book/src/fdm.md")]
    mod fdm {}
    #[doc = include_str!("../../../book/src/tfr.md")]
    mod tfr {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
