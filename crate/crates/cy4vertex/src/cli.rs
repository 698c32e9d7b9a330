pub fn main() { unimplemented!() }
