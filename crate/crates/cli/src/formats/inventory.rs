//! Inventory override files: one symbol per line, epsilon spelled `<eps>`.

use phonvar_core::inventory::PhonemeInventory;

use crate::error::Result;

/// Blank lines and `#` comments are ignored.
pub fn parse_inventory(text: &str) -> Result<PhonemeInventory> {
    let symbols = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    Ok(PhonemeInventory::from_symbols(symbols)?)
}

pub fn write_inventory(inventory: &PhonemeInventory) -> String {
    inventory.symbols().iter().map(|s| format!("{s}\n")).collect()
}
