pub mod micro;
pub mod oracle;
