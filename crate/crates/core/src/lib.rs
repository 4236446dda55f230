//! Simulation and secrecy-capacity analysis of measurement-device-independent
//! quantum secure direct communication (MDI-TS and MDI-DL04).

pub mod linalg;
pub mod quantum;
pub mod channels;
pub mod infotheory;
pub mod attack;
pub mod model;
pub mod protocol;
pub mod report;
pub mod verify;
