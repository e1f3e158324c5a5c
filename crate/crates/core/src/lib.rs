pub mod arith;
pub mod certifier;
pub mod density;
pub mod etaquot;
pub mod f2series;
pub mod partitions;
pub mod radu;

pub use etaquot::{Cusp, EtaError, EtaQuotient, ModularityReport};
pub use f2series::{F2Series, SeriesError};
pub use partitions::{parity_table, ParityTable, TableKind};
pub use radu::{RaduError, RaduTuple, SVector};
