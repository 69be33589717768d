# Fermionic state construction, validation and JSON interchange
