pub mod herbrand;
