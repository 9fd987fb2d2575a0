from defect_nls.engine import darboux, defect, lax, numerics, scattering

__all__ = [
	"numerics",
	"lax",
	"darboux",
	"defect",
	"scattering",
]
