from strongmax.main import StrongMaximalStudy
