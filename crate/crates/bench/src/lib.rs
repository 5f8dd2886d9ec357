// lib stub
