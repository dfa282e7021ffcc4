# Teledistill Test Suite
