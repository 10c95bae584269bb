pub mod events;
pub mod linalg;
pub mod scalar;
pub mod series;
pub mod word;
pub mod nerode;
pub mod realize;
pub mod profiles;
pub mod fit;
pub mod format;
pub mod cli;
