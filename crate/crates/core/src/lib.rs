pub mod construction;
pub mod error;
pub mod family;
pub mod rational;
pub mod words;
pub mod oracle;
pub mod bispecial;
pub mod frequency;
pub mod suite;
pub mod reports;
