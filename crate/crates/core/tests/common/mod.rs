pub mod elliptic;
