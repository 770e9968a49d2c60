"""LP decoding for compressed sensing and channel coding - Main package."""
