use std::fmt;

/// Exit status classes; the numeric codes are part of the command-line contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitClass {
    Usage,
    Input,
    Cap,
    Certificate,
}

impl ExitClass {
    pub fn code(self) -> i32 {
        match self {
            ExitClass::Usage => 2,
            ExitClass::Input => 3,
            ExitClass::Cap => 4,
            ExitClass::Certificate => 5,
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub class: ExitClass,
    pub message: String,
}

impl CliError {
    pub fn new(class: ExitClass, message: impl Into<String>) -> Self {
        CliError {
            class,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(ExitClass::Usage, message)
    }

    pub fn certificate(message: impl Into<String>) -> Self {
        Self::new(ExitClass::Certificate, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<symjoin::Error> for CliError {
    fn from(e: symjoin::Error) -> Self {
        use symjoin::Error as E;
        let class = match &e {
            E::Parameter(_) => ExitClass::Usage,
            E::CapExceeded { .. } => ExitClass::Cap,
            E::Consistency(_) | E::NoCertificate(_) | E::NotChainComplex(_) => {
                ExitClass::Certificate
            }
            _ => ExitClass::Input,
        };
        CliError::new(class, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(ExitClass::Input, e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::new(ExitClass::Input, e.to_string())
    }
}
