pub mod error;
pub mod laurent;
pub mod multipoly;
pub mod coxeter;
pub mod selfdual;
pub mod gflq;
pub mod qlinalg;
pub mod soergel;
pub mod hecke;
pub mod rouquier;
pub mod schur;
