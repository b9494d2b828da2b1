use jacobi_spectra::SpectralError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Library(#[from] SpectralError),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}
