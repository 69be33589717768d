# Entropic entanglement indicators, ESBL concurrence and indicator reports
