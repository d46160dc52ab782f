use std::fmt;

/// What went wrong, coarse enough to map onto an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad flags, unusable configuration, missing environment. Exit 1.
    Config,
    /// Unreadable or malformed input/output files. Exit 2.
    Data,
    /// The chat backend failed, including strict-replay misses. Exit 3.
    Backend,
    /// A run finished but lost some work to the network. Exit 4.
    PartialNetwork,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Config, message: message.into() }
    }

    pub fn data(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Data, message: message.into() }
    }

    pub fn backend(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Backend, message: message.into() }
    }

    pub fn partial_network(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::PartialNetwork, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Config => 1,
            ErrorKind::Data => 2,
            ErrorKind::Backend => 3,
            ErrorKind::PartialNetwork => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

pub type CliResult = Result<(), CliError>;
