"""HS entanglement geometry toolkit."""
