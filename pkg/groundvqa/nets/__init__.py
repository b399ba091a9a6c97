"""Network definitions, and the text and feature processing they rely on."""
