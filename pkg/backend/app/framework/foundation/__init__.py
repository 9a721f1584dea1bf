"""Names and packets shared by every layer"""
